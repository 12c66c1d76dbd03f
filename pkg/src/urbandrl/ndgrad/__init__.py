"""Minimal tensor/autodiff core used by every network in the package."""

from .functional import conv2d, conv_out_size, conv_transpose2d
from .nn import (
    Activation,
    BatchNorm1d,
    Conv2d,
    ConvTranspose2d,
    Dense,
    LayerSpec,
    Module,
    Sequential,
    activate,
    build,
    copy_into,
    forward,
    frozen,
)
from .optim import Adam, adam_step
from .serialize import CheckpointError, load_file, load_params, load_with_metadata, save_file, save_params
from .tensor import GraphError, Tensor, concat, minimum, no_grad, stack_tensors, tensor

__all__ = [
    "Activation", "Adam", "BatchNorm1d", "CheckpointError", "Conv2d", "ConvTranspose2d", "Dense",
    "GraphError", "LayerSpec", "Module", "Sequential", "Tensor", "activate", "adam_step", "build",
    "concat", "conv2d", "conv_out_size", "conv_transpose2d", "copy_into", "forward", "frozen",
    "load_file", "load_params", "load_with_metadata", "minimum", "no_grad", "save_file",
    "save_params", "stack_tensors", "tensor",
]
