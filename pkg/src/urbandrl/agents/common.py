"""Target-network helpers and the agent interface."""

from __future__ import annotations

import numpy as np

from ..ndgrad import Module, Tensor, copy_into


def soft_update(target: Module, online: Module, tau: float) -> None:
    """In-place ``target <- tau * online + (1 - tau) * target`` on every
    parameter and buffer."""
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    t_params, o_params = dict(target.named_parameters()), dict(online.named_parameters())
    if t_params.keys() != o_params.keys():
        raise ValueError("target and online networks have different parameter sets")
    for name, tp in t_params.items():
        op = o_params[name]
        if tp.shape != op.shape:
            raise ValueError(f"shape mismatch for {name}: {tp.shape} vs {op.shape}")
        tp.data *= 1.0 - tau
        tp.data += tau * op.data
    o_bufs = dict(online.named_buffers())
    for name, buf in target.named_buffers():
        buf *= 1.0 - tau
        buf += tau * o_bufs[name]


def hard_update(target: Module, online: Module) -> None:
    copy_into(target, online)


def check_finite_loss(loss: Tensor, what: str) -> float:
    v = loss.item()
    if not np.isfinite(v):
        raise FloatingPointError(f"{what} loss is {v}")
    return v


class Agent:
    """Interface shared by the learners.

    ``act`` maps one state to an action (an index or a normalized vector);
    ``update`` consumes a Batch and returns named losses; ``modules`` lists
    everything that goes into a checkpoint.
    """

    algo = ""
    discrete = False

    def act(self, state, explore: bool, step: int = 0, path_step: int = 0):
        raise NotImplementedError

    def update(self, batch) -> dict[str, float]:
        raise NotImplementedError

    def modules(self) -> dict[str, Module]:
        raise NotImplementedError

    def state_dict(self) -> dict[str, np.ndarray]:
        out = {}
        for prefix, mod in self.modules().items():
            for k, v in mod.state_dict().items():
                out[f"{prefix}.{k}"] = v
        return out

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        for prefix, mod in self.modules().items():
            sub = {k[len(prefix) + 1:]: v for k, v in state.items() if k.startswith(prefix + ".")}
            mod.load_state_dict(sub)
        known = {f"{p}." for p in self.modules()}
        extra = [k for k in state if not any(k.startswith(p) for p in known)]
        if extra:
            raise ValueError(f"unexpected checkpoint entries: {extra[:5]}")

