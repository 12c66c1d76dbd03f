"""Network builders for the three agents and the squashed Gaussian policy."""

from __future__ import annotations

import math

import numpy as np

from ..ndgrad import BatchNorm1d, Dense, Module, Sequential, Tensor, concat
from ..ndgrad.nn import Activation

DDQN_HIDDEN = (256, 128, 64, 32)
TD3_HIDDEN = (64, 200, 20)
SAC_HIDDEN = (256, 128, 64, 32)
LOG_STD_MIN, LOG_STD_MAX = -20.0, 2.0
LOG2 = math.log(2.0)


def mlp(n_in: int, hidden, n_out: int, activation: str = "relu", out_activation: str = "none",
        batch_norm: bool = False, slope: float = 0.01, rng=None) -> Sequential:
    layers: list[Module] = []
    prev = n_in
    for h in hidden:
        layers.append(Dense(prev, h, rng=rng))
        if batch_norm:
            layers.append(BatchNorm1d(h))
        layers.append(Activation(activation, slope))
        prev = h
    layers.append(Dense(prev, n_out, activation=out_activation, rng=rng))
    return Sequential(*layers)


def as_input(x, dtype=np.float32) -> Tensor:
    if isinstance(x, Tensor):
        return x
    return Tensor(np.atleast_2d(np.asarray(x, dtype=dtype)))


class QNetwork(Module):
    """Critic over concatenated (state, action)."""

    def __init__(self, state_dim: int, action_dim: int, hidden, activation="relu", slope=0.01, rng=None):
        self.body = mlp(state_dim + action_dim, hidden, 1, activation, slope=slope, rng=rng)

    def forward(self, state, action) -> Tensor:
        s, a = as_input(state, self.dtype), as_input(action, self.dtype)
        return self.body(concat([s, a], axis=1)).reshape(-1)

    @property
    def dtype(self):
        return self.body[0].weight.data.dtype


class ValueNetwork(Module):
    def __init__(self, state_dim: int, hidden, n_out: int = 1, activation="relu", rng=None):
        self.body = mlp(state_dim, hidden, n_out, activation, rng=rng)
        self.n_out = n_out

    def forward(self, state) -> Tensor:
        out = self.body(as_input(state, self.body[0].weight.data.dtype))
        return out.reshape(-1) if self.n_out == 1 else out


class DeterministicActor(Module):
    def __init__(self, state_dim: int, action_dim: int, hidden=TD3_HIDDEN, batch_norm=True, slope=0.01,
                 rng=None):
        self.body = mlp(state_dim, hidden, action_dim, "leaky_relu", "tanh", batch_norm, slope, rng)

    def forward(self, state) -> Tensor:
        return self.body(as_input(state, self.body[0].weight.data.dtype))


def tanh_log_det(u: Tensor) -> Tensor:
    """log(1 - tanh(u)^2), computed without cancellation."""
    return ((-u + LOG2) - (u * -2.0).softplus()) * 2.0


class GaussianPolicy(Module):
    """Shared trunk with a two-branch head: mean and log-std per action dim.

    Samples are squashed with tanh; ``log_prob`` includes the change of
    variables correction.
    """

    def __init__(self, state_dim: int, action_dim: int, hidden=SAC_HIDDEN, rng=None):
        self.trunk = mlp(state_dim, hidden[:-1], hidden[-1], "relu", "relu", rng=rng)
        self.mean_head = Dense(hidden[-1], action_dim, rng=rng)
        self.log_std_head = Dense(hidden[-1], action_dim, rng=rng)
        self.action_dim = action_dim

    def heads(self, state) -> tuple[Tensor, Tensor]:
        h = self.trunk(as_input(state, self.mean_head.weight.data.dtype))
        return self.mean_head(h), self.log_std_head(h).clip(LOG_STD_MIN, LOG_STD_MAX)

    def forward(self, state) -> tuple[Tensor, Tensor]:
        return self.heads(state)

    def sample(self, state, rng: np.random.Generator, eps: np.ndarray | None = None):
        """Reparameterized squashed sample and its log-density, both Tensors."""
        mean, log_std = self.heads(state)
        if eps is None:
            eps = rng.standard_normal(mean.shape)
        eps_t = Tensor(np.asarray(eps, dtype=mean.data.dtype))
        u = mean + log_std.exp() * eps_t
        action = u.tanh()
        gauss = (eps_t * eps_t * -0.5 - log_std - 0.5 * math.log(2 * math.pi)).sum(axis=1)
        log_prob = gauss - tanh_log_det(u).sum(axis=1)
        return action, log_prob

    def mean_action(self, state) -> Tensor:
        mean, _ = self.heads(state)
        return mean.tanh()


def squashed_gaussian_log_prob(action, mean, log_std) -> np.ndarray:
    """Density of ``tanh(N(mean, exp(log_std)^2))`` at ``action`` (numpy)."""
    a = np.asarray(action, dtype=np.float64)
    u = np.arctanh(np.clip(a, -1 + 1e-12, 1 - 1e-12))
    std = np.exp(log_std)
    gauss = -0.5 * ((u - mean) / std) ** 2 - log_std - 0.5 * math.log(2 * math.pi)
    return gauss - np.log1p(-a * a)
