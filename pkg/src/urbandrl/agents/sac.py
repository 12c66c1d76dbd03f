"""Soft actor-critic with a separate soft value network and its target."""

from __future__ import annotations

import numpy as np

from ..ndgrad import Adam, Tensor, frozen, minimum, no_grad
from .common import Agent, check_finite_loss, hard_update, soft_update
from .config import TrainConfig
from .networks import SAC_HIDDEN, GaussianPolicy, QNetwork, ValueNetwork
from .replay import Batch


def soft_value(q, log_pi, alpha_ent: float):
    """Single-sample soft state value ``Q - alpha * log pi``."""
    return q - alpha_ent * log_pi


def _arr(x):
    return x.data if isinstance(x, Tensor) else np.asarray(x)


def sac_value_target(states, policy_sample, q_nets, alpha_ent: float) -> np.ndarray:
    """``min_i Q_i(s, a~) - alpha * log pi(a~|s)`` with a fresh action sample.

    ``policy_sample(states)`` returns ``(actions, log_probs)``.
    """
    with no_grad():
        a, log_pi = policy_sample(states)
        a, log_pi = _arr(a), _arr(log_pi)
        q = np.minimum.reduce([_arr(qn(states, a)) for qn in q_nets])
    return soft_value(q, log_pi, alpha_ent)


def sac_q_target(batch: Batch, target_value_net, gamma: float) -> np.ndarray:
    with no_grad():
        v_next = _arr(target_value_net(batch.next_state))
    return batch.reward + gamma * (1.0 - batch.done) * v_next


def sac_policy_loss(states, policy: GaussianPolicy, q_nets, alpha_ent: float, rng: np.random.Generator,
                    eps: np.ndarray | None = None) -> Tensor:
    """``E[alpha * log pi(f(eps; s)|s) - min_i Q_i(s, f(eps; s))]``; critics stay frozen."""
    with frozen(*q_nets):
        a, log_pi = policy.sample(states, rng, eps)
        qs = [qn(states, a) for qn in q_nets]
        q = qs[0]
        for other in qs[1:]:
            q = minimum(q, other)
        return (log_pi * alpha_ent - q).mean()


def _mse(pred: Tensor, target: np.ndarray) -> Tensor:
    diff = pred - Tensor(np.asarray(target, dtype=pred.data.dtype))
    return (diff * diff).mean() * 0.5


class SACAgent(Agent):
    algo = "sac"

    def __init__(self, state_dim: int, config: TrainConfig, action_dim: int = 2,
                 rng: np.random.Generator | None = None, hidden=None, dtype=np.float32):
        self.config = config
        self.rng = rng if rng is not None else np.random.default_rng(0)
        init = np.random.default_rng(self.rng.integers(1 << 31))
        hidden = config.hidden_sizes(SAC_HIDDEN) if hidden is None else hidden
        self.policy = GaussianPolicy(state_dim, action_dim, hidden, rng=init)
        self.q1 = QNetwork(state_dim, action_dim, hidden, rng=init)
        self.q2 = QNetwork(state_dim, action_dim, hidden, rng=init)
        self.value = ValueNetwork(state_dim, hidden, rng=init)
        self.value_target = ValueNetwork(state_dim, hidden, rng=init)
        if dtype != np.float32:
            for m in self.modules().values():
                m.to(dtype)
        hard_update(self.value_target, self.value)
        self.value_target.requires_grad_(False)
        lr = config.lr_sac
        self.opts = {name: Adam(getattr(self, name).parameters(), learning_rate=lr)
                     for name in ("policy", "q1", "q2", "value")}
        self.action_dim = action_dim
        self.updates = 0

    def modules(self):
        return {"policy": self.policy, "q1": self.q1, "q2": self.q2, "value": self.value,
                "value_target": self.value_target}

    def act(self, state, explore: bool, step: int = 0, path_step: int = 0) -> np.ndarray:
        with no_grad():
            if explore:
                a, _ = self.policy.sample(state, self.rng)
            else:
                a = self.policy.mean_action(state)
        return a.data[0].astype(np.float64)

    def _sample(self, states):
        return self.policy.sample(states, self.rng)

    def update(self, batch: Batch) -> dict[str, float]:
        c = self.config
        out = {}
        v_hat = sac_value_target(batch.state, self._sample, (self.q1, self.q2), c.alpha_ent)
        q_hat = sac_q_target(batch, self.value_target, c.gamma)

        loss = _mse(self.value(batch.state), v_hat)
        out["v_loss"] = check_finite_loss(loss, "sac value")
        self.opts["value"].zero_grad()
        loss.backward()
        self.opts["value"].step()

        for name in ("q1", "q2"):
            net = getattr(self, name)
            loss = _mse(net(batch.state, batch.action), q_hat)
            out[f"{name}_loss"] = check_finite_loss(loss, f"sac {name}")
            self.opts[name].zero_grad()
            loss.backward()
            self.opts[name].step()

        loss = sac_policy_loss(batch.state, self.policy, (self.q1, self.q2), c.alpha_ent, self.rng)
        out["policy_loss"] = check_finite_loss(loss, "sac policy")
        self.opts["policy"].zero_grad()
        loss.backward()
        self.opts["policy"].step()

        soft_update(self.value_target, self.value, c.tau)
        self.updates += 1
        return out
