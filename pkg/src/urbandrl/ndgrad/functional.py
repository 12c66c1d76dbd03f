"""Convolution primitives (NCHW layout) built on im2col."""

from __future__ import annotations

import numpy as np

from .tensor import Tensor


def conv_out_size(size: int, kernel: int, stride: int, padding: int) -> int:
    return (size + 2 * padding - kernel) // stride + 1


def _im2col(x: np.ndarray, k: int, stride: int, padding: int) -> tuple[np.ndarray, int, int]:
    n, c, h, w = x.shape
    oh = conv_out_size(h, k, stride, padding)
    ow = conv_out_size(w, k, stride, padding)
    xp = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding))) if padding else x
    cols = np.empty((n, oh, ow, c, k, k), dtype=x.dtype)
    for i in range(k):
        for j in range(k):
            patch = xp[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride]
            cols[:, :, :, :, i, j] = patch.transpose(0, 2, 3, 1)
    return cols.reshape(n * oh * ow, c * k * k), oh, ow


def _col2im(cols: np.ndarray, x_shape: tuple, k: int, stride: int, padding: int) -> np.ndarray:
    n, c, h, w = x_shape
    oh = conv_out_size(h, k, stride, padding)
    ow = conv_out_size(w, k, stride, padding)
    cols = cols.reshape(n, oh, ow, c, k, k)
    xp = np.zeros((n, c, h + 2 * padding, w + 2 * padding), dtype=cols.dtype)
    for i in range(k):
        for j in range(k):
            xp[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride] += cols[
                :, :, :, :, i, j
            ].transpose(0, 3, 1, 2)
    if padding:
        return xp[:, :, padding:-padding, padding:-padding]
    return xp


def _conv(x: np.ndarray, w: np.ndarray, stride: int, padding: int):
    n = x.shape[0]
    o, _, k, _ = w.shape
    cols, oh, ow = _im2col(x, k, stride, padding)
    out = cols @ w.reshape(o, -1).T
    return out.reshape(n, oh, ow, o).transpose(0, 3, 1, 2), cols


def _conv_input_grad(gout: np.ndarray, w: np.ndarray, x_shape: tuple, stride: int, padding: int):
    o, _, k, _ = w.shape
    g2 = gout.transpose(0, 2, 3, 1).reshape(-1, o)
    return _col2im(g2 @ w.reshape(o, -1), x_shape, k, stride, padding)


def _conv_weight_grad(cols: np.ndarray, gout: np.ndarray, w_shape: tuple) -> np.ndarray:
    o = w_shape[0]
    g2 = gout.transpose(0, 2, 3, 1).reshape(-1, o)
    return (g2.T @ cols).reshape(w_shape)


def conv2d(x: Tensor, weight: Tensor, bias: Tensor | None, stride: int = 2, padding: int = 1) -> Tensor:
    """Cross-correlation of ``x`` (N, C, H, W) with ``weight`` (O, C, k, k)."""
    if x.ndim != 4 or x.shape[1] != weight.shape[1]:
        raise ValueError(
            f"conv2d expects input (N, {weight.shape[1]}, H, W), got {x.shape} for weight {weight.shape}"
        )
    out, cols = _conv(x.data, weight.data, stride, padding)
    parents = (x, weight) if bias is None else (x, weight, bias)
    if bias is not None:
        out = out + bias.data.reshape(1, -1, 1, 1)

    def bw(g):
        gx = _conv_input_grad(g, weight.data, x.shape, stride, padding) if x.requires_grad else None
        gw = _conv_weight_grad(cols, g, weight.shape)
        if bias is None:
            return gx, gw
        return gx, gw, g.sum(axis=(0, 2, 3))

    return Tensor._make(out, parents, bw, "conv2d")


def conv_transpose2d(
    x: Tensor, weight: Tensor, bias: Tensor | None, stride: int = 2, padding: int = 1, output_padding: int = 1
) -> Tensor:
    """Adjoint of :func:`conv2d`; ``weight`` is (C_in, C_out, k, k)."""
    if x.ndim != 4 or x.shape[1] != weight.shape[0]:
        raise ValueError(
            f"conv_transpose2d expects input (N, {weight.shape[0]}, H, W), got {x.shape} for weight {weight.shape}"
        )
    n, _, h, w = x.shape
    k = weight.shape[2]
    oh = (h - 1) * stride - 2 * padding + k + output_padding
    ow = (w - 1) * stride - 2 * padding + k + output_padding
    y_shape = (n, weight.shape[1], oh, ow)
    out = _conv_input_grad(x.data, weight.data, y_shape, stride, padding)
    if bias is not None:
        out = out + bias.data.reshape(1, -1, 1, 1)
    parents = (x, weight) if bias is None else (x, weight, bias)

    def bw(g):
        gx, cols = _conv(g, weight.data, stride, padding)
        # weight grad: the forward conv uses g as input and x as output gradient
        gw = _conv_weight_grad(cols, x.data, weight.shape)
        if bias is None:
            return gx, gw
        return gx, gw, g.sum(axis=(0, 2, 3))

    return Tensor._make(out, parents, bw, "conv_transpose2d")
