"""Layers and module containers."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import functional as F
from .tensor import Tensor, no_grad

ACTIVATIONS = ("relu", "leaky_relu", "tanh", "sigmoid", "none")


def activate(x: Tensor, name: str, slope: float = 0.01) -> Tensor:
    if name == "relu":
        return x.relu()
    if name == "leaky_relu":
        return x.leaky_relu(slope)
    if name == "tanh":
        return x.tanh()
    if name == "sigmoid":
        return x.sigmoid()
    if name == "none":
        return x
    raise ValueError(f"unknown activation {name!r}")


def parameter(data: np.ndarray) -> Tensor:
    return Tensor(np.ascontiguousarray(data), requires_grad=True)


class Module:
    """Base class: parameters are the Tensor attributes (frozen or not),
    buffers are listed in ``_buffers`` and submodules are discovered by
    attribute traversal (lists of modules are supported)."""

    training = True
    _buffers: tuple[str, ...] = ()

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)

    def forward(self, *args, **kwargs):
        raise NotImplementedError

    def children(self) -> Iterator[tuple[str, "Module"]]:
        for name, value in vars(self).items():
            if isinstance(value, Module):
                yield name, value
            elif isinstance(value, (list, tuple)):
                for i, item in enumerate(value):
                    if isinstance(item, Module):
                        yield f"{name}.{i}", item

    def named_parameters(self, prefix: str = "") -> Iterator[tuple[str, Tensor]]:
        for name, value in vars(self).items():
            if isinstance(value, Tensor):
                yield prefix + name, value
        for name, child in self.children():
            yield from child.named_parameters(prefix + name + ".")

    def parameters(self) -> list[Tensor]:
        return [p for _, p in self.named_parameters()]

    def named_buffers(self, prefix: str = "") -> Iterator[tuple[str, np.ndarray]]:
        for name in self._buffers:
            yield prefix + name, getattr(self, name)
        for name, child in self.children():
            yield from child.named_buffers(prefix + name + ".")

    def state_dict(self) -> dict[str, np.ndarray]:
        state = {name: p.data for name, p in self.named_parameters()}
        state.update({name: b for name, b in self.named_buffers()})
        return state

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        own = self.state_dict()
        missing = set(own) - set(state)
        extra = set(state) - set(own)
        if missing or extra:
            raise KeyError(f"state mismatch: missing={sorted(missing)} unexpected={sorted(extra)}")
        for name, value in state.items():
            if own[name].shape != value.shape:
                raise ValueError(f"shape mismatch for {name}: {own[name].shape} vs {value.shape}")
        params = dict(self.named_parameters())
        for name, value in state.items():
            if name in params:
                params[name].data = np.array(value, dtype=params[name].dtype)
            else:
                self._set_buffer(name, np.array(value, dtype=own[name].dtype))

    def _set_buffer(self, dotted: str, value: np.ndarray) -> None:
        obj = self
        *path, leaf = dotted.split(".")
        for part in path:
            obj = obj[int(part)] if isinstance(obj, (list, tuple)) else getattr(obj, part)
        setattr(obj, leaf, value)

    def train(self, mode: bool = True) -> "Module":
        self.training = mode
        for _, child in self.children():
            child.train(mode)
        return self

    def eval(self) -> "Module":
        return self.train(False)

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.grad = None

    def to(self, dtype) -> "Module":
        for p in self.parameters():
            p.data = p.data.astype(dtype)
        for name, b in list(self.named_buffers()):
            self._set_buffer(name, b.astype(dtype))
        return self

    def clone(self) -> "Module":
        return copy.deepcopy(self)

    def requires_grad_(self, flag: bool) -> "Module":
        for p in self.parameters():
            p.requires_grad = flag
        return self


class frozen:
    """Context manager that stops gradients from reaching a module's params."""

    def __init__(self, *modules: Module):
        self.params = [p for m in modules for p in m.parameters()]

    def __enter__(self):
        for p in self.params:
            p.requires_grad = False
        return self

    def __exit__(self, *exc):
        for p in self.params:
            p.requires_grad = True
        return False


def _fan_in_uniform(rng: np.random.Generator, shape: tuple, fan_in: int) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(np.float32)


class Dense(Module):
    def __init__(self, n_in: int, n_out: int, activation: str = "none", slope: float = 0.01, rng=None):
        rng = rng if rng is not None else np.random.default_rng(0)
        self.n_in, self.n_out = n_in, n_out
        self.activation, self.slope = activation, slope
        self.weight = parameter(_fan_in_uniform(rng, (n_in, n_out), n_in))
        self.bias = parameter(_fan_in_uniform(rng, (n_out,), n_in))

    def forward(self, x: Tensor) -> Tensor:
        if x.ndim != 2 or x.shape[1] != self.n_in:
            raise ValueError(f"dense layer expects input (N, {self.n_in}), got {x.shape}")
        return activate(x @ self.weight + self.bias, self.activation, self.slope)


class Conv2d(Module):
    def __init__(self, c_in: int, c_out: int, kernel: int = 3, stride: int = 2, padding: int = 1,
                 activation: str = "none", rng=None):
        rng = rng if rng is not None else np.random.default_rng(0)
        self.stride, self.padding, self.activation = stride, padding, activation
        fan_in = c_in * kernel * kernel
        self.weight = parameter(_fan_in_uniform(rng, (c_out, c_in, kernel, kernel), fan_in))
        self.bias = parameter(_fan_in_uniform(rng, (c_out,), fan_in))

    def forward(self, x: Tensor) -> Tensor:
        return activate(F.conv2d(x, self.weight, self.bias, self.stride, self.padding), self.activation)


class ConvTranspose2d(Module):
    def __init__(self, c_in: int, c_out: int, kernel: int = 3, stride: int = 2, padding: int = 1,
                 output_padding: int = 1, activation: str = "none", rng=None):
        rng = rng if rng is not None else np.random.default_rng(0)
        self.stride, self.padding, self.output_padding = stride, padding, output_padding
        self.activation = activation
        # each output pixel sees roughly c_in * k * k / stride^2 inputs
        fan_in = max(1, c_in * kernel * kernel // (stride * stride))
        self.weight = parameter(_fan_in_uniform(rng, (c_in, c_out, kernel, kernel), fan_in))
        self.bias = parameter(_fan_in_uniform(rng, (c_out,), fan_in))

    def forward(self, x: Tensor) -> Tensor:
        out = F.conv_transpose2d(x, self.weight, self.bias, self.stride, self.padding, self.output_padding)
        return activate(out, self.activation)


class BatchNorm1d(Module):
    """Batch normalization over the feature axis of (N, D) inputs.

    Training mode normalizes with batch statistics and folds them into the
    running estimates with ``running = momentum * running + (1 - momentum) * batch``.
    """

    _buffers = ("running_mean", "running_var")

    def __init__(self, n: int, momentum: float = 0.99, eps: float = 1e-5):
        self.n, self.momentum, self.eps = n, momentum, eps
        self.gamma = parameter(np.ones(n, dtype=np.float32))
        self.beta = parameter(np.zeros(n, dtype=np.float32))
        self.running_mean = np.zeros(n, dtype=np.float32)
        self.running_var = np.ones(n, dtype=np.float32)

    def forward(self, x: Tensor) -> Tensor:
        if x.ndim != 2 or x.shape[1] != self.n:
            raise ValueError(f"batch_norm expects input (N, {self.n}), got {x.shape}")
        if self.training:
            if x.shape[0] < 2:
                raise ValueError("batch_norm in training mode needs a batch of at least 2")
            mu = x.mean(axis=0, keepdims=True)
            centered = x - mu
            var = (centered * centered).mean(axis=0, keepdims=True)
            xhat = centered / (var + self.eps) ** 0.5
            m = self.momentum
            self.running_mean = (m * self.running_mean + (1 - m) * mu.data[0]).astype(self.running_mean.dtype)
            self.running_var = (m * self.running_var + (1 - m) * var.data[0]).astype(self.running_var.dtype)
        else:
            scale = 1.0 / np.sqrt(self.running_var + self.eps)
            xhat = (x - self.running_mean) * scale.astype(x.dtype)
        return xhat * self.gamma + self.beta


class Sequential(Module):
    def __init__(self, *layers: Module):
        self.layers = list(layers)

    def forward(self, x: Tensor) -> Tensor:
        for layer in self.layers:
            x = layer(x)
        return x

    def __getitem__(self, i: int) -> Module:
        return self.layers[i]

    def __len__(self) -> int:
        return len(self.layers)


class Activation(Module):
    def __init__(self, name: str, slope: float = 0.01):
        self.name, self.slope = name, slope

    def forward(self, x: Tensor) -> Tensor:
        return activate(x, self.name, self.slope)


@dataclass(frozen=True)
class LayerSpec:
    """Declarative description of one layer.

    ``dims`` holds ``(n_in, n_out)`` for dense, ``(c_in, c_out)`` for the
    conv kinds and ``(n,)`` for batch_norm.
    """

    kind: str
    dims: tuple[int, ...]
    activation: str = "none"
    slope: float = 0.01
    kernel: int = 3
    stride: int = 2
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("dense", "conv2d", "conv_transpose2d", "batch_norm"):
            raise ValueError(f"unknown layer kind {self.kind!r}")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")

    def build(self, rng=None) -> Module:
        if self.kind == "dense":
            return Dense(*self.dims, activation=self.activation, slope=self.slope, rng=rng)
        if self.kind == "conv2d":
            layer = Conv2d(*self.dims, kernel=self.kernel, stride=self.stride, rng=rng)
        elif self.kind == "conv_transpose2d":
            layer = ConvTranspose2d(*self.dims, kernel=self.kernel, stride=self.stride, rng=rng)
        else:
            layer = BatchNorm1d(self.dims[0], **self.extra)
        if self.activation == "none":
            return layer
        return Sequential(layer, Activation(self.activation, self.slope))


def forward(layer: Module, x: Tensor) -> Tensor:
    return layer(x)


def build(specs: list[LayerSpec], rng=None) -> Sequential:
    return Sequential(*(spec.build(rng) for spec in specs))


def copy_into(target: Module, source: Module) -> None:
    """Hard-copy parameters and buffers of ``source`` into ``target``."""
    with no_grad():
        target.load_state_dict({k: v.copy() for k, v in source.state_dict().items()})
