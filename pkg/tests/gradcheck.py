"""Central finite-difference oracle used by the gradient tests.

The oracle only ever calls the forward path; ``backward`` is never touched.
"""

from __future__ import annotations

import numpy as np


def numeric_grad(loss_fn, tensor, step=1e-3, indices=None):
    """d loss / d tensor by central differences at float64.

    ``indices`` limits the perturbed entries (flat indices) for large tensors.
    """
    flat = tensor.data.reshape(-1)
    idx = range(flat.size) if indices is None else indices
    out = np.zeros(flat.size, dtype=np.float64)
    for i in idx:
        orig = flat[i]
        flat[i] = orig + step
        up = float(loss_fn().data)
        flat[i] = orig - step
        down = float(loss_fn().data)
        flat[i] = orig
        out[i] = (up - down) / (2 * step)
    return out.reshape(tensor.shape)


def rel_error(analytic, numeric, indices=None):
    a = np.asarray(analytic, dtype=np.float64).reshape(-1)
    n = np.asarray(numeric, dtype=np.float64).reshape(-1)
    if indices is not None:
        a, n = a[list(indices)], n[list(indices)]
    scale = max(np.abs(a).max(), np.abs(n).max(), 1e-8)
    return float(np.abs(a - n).max() / scale)


def check_grads(loss_fn, tensors, step=1e-3, max_entries=40, rng=None):
    """Max relative error over ``tensors`` between backward and the oracle."""
    rng = rng or np.random.default_rng(0)
    for t in tensors:
        t.grad = None
    loss = loss_fn()
    loss.backward()
    worst = 0.0
    for t in tensors:
        analytic = np.zeros(t.shape) if t.grad is None else t.grad.copy()
        size = t.data.size
        indices = None
        if size > max_entries:
            indices = sorted(rng.choice(size, max_entries, replace=False).tolist())
        numeric = numeric_grad(loss_fn, t, step, indices)
        worst = max(worst, rel_error(analytic, numeric, indices))
    return worst
