"""Double DQN over a discrete acceleration x steering grid."""

from __future__ import annotations

import itertools

import numpy as np

from ..ndgrad import Adam, Tensor, no_grad
from .common import Agent, check_finite_loss, hard_update
from .config import TrainConfig, linear_epsilon
from .networks import DDQN_HIDDEN, ValueNetwork
from .replay import Batch

ACCEL_LEVELS = (-3.0, 0.0, 3.0)
STEER_LEVELS = (-0.5, -0.2, 0.0, 0.2, 0.5)
ACTION_GRID = tuple(itertools.product(ACCEL_LEVELS, STEER_LEVELS))


def grid_action(index: int) -> tuple[float, float]:
    """Physical (acceleration, steer) for a discrete action index."""
    return ACTION_GRID[int(index)]


def ddqn_target(batch: Batch, online_q, target_q, gamma: float) -> np.ndarray:
    """Online net picks the next action, target net scores it."""
    with no_grad():
        q_next_online = online_q(batch.next_state).data
        q_next_target = target_q(batch.next_state).data
    best = np.argmax(q_next_online, axis=1)
    boot = q_next_target[np.arange(len(best)), best]
    return batch.reward + gamma * (1.0 - batch.done) * boot


def dqn_target(batch: Batch, target_q, gamma: float) -> np.ndarray:
    with no_grad():
        q_next = target_q(batch.next_state).data
    return batch.reward + gamma * (1.0 - batch.done) * q_next.max(axis=1)


def td_loss(q_net, batch: Batch, y: np.ndarray) -> Tensor:
    q = q_net(batch.state)
    idx = np.asarray(batch.action, dtype=np.int64).reshape(-1)
    chosen = q[np.arange(len(idx)), idx]
    diff = chosen - Tensor(np.asarray(y, dtype=q.data.dtype))
    return (diff * diff).mean()


def q_weighted_exploration(q_values, epsilon: float, rng: np.random.Generator,
                           temperature: float = 1.0) -> int:
    """Greedy with probability 1 - epsilon, else a softmax(Q / T) draw."""
    q = np.asarray(q_values, dtype=np.float64).reshape(-1)
    if not np.isfinite(q).all():
        raise ValueError("Q-values must be finite")
    if rng.random() >= epsilon:
        return int(np.argmax(q))
    z = (q - q.max()) / temperature
    p = np.exp(z)
    p /= p.sum()
    return int(rng.choice(len(q), p=p))


class DDQNAgent(Agent):
    algo = "ddqn"
    discrete = True

    def __init__(self, state_dim: int, config: TrainConfig, n_actions: int = len(ACTION_GRID),
                 rng: np.random.Generator | None = None, hidden=None, dtype=np.float32):
        self.config = config
        self.rng = rng if rng is not None else np.random.default_rng(0)
        init = np.random.default_rng(self.rng.integers(1 << 31))
        hidden = config.hidden_sizes(DDQN_HIDDEN) if hidden is None else hidden
        self.q = ValueNetwork(state_dim, hidden, n_actions, rng=init)
        self.q_target = ValueNetwork(state_dim, hidden, n_actions, rng=init)
        if dtype != np.float32:
            self.q.to(dtype)
            self.q_target.to(dtype)
        hard_update(self.q_target, self.q)
        self.q_target.requires_grad_(False)
        self.opt = Adam(self.q.parameters(), learning_rate=config.lr_q_ddqn)
        self.n_actions = n_actions
        self.updates = 0

    def modules(self):
        return {"q": self.q, "q_target": self.q_target}

    def q_values(self, state) -> np.ndarray:
        with no_grad():
            return self.q(state).data

    def epsilon(self, step: int) -> float:
        c = self.config
        return linear_epsilon(step, c.epsilon_start, c.epsilon_end, c.epsilon_decay_steps)

    def act(self, state, explore: bool, step: int = 0, path_step: int = 0) -> int:
        q = self.q_values(state)[0]
        if not explore:
            return int(np.argmax(q))
        return q_weighted_exploration(q, self.epsilon(step), self.rng, self.config.exploration_temperature)

    def update(self, batch: Batch) -> dict[str, float]:
        y = ddqn_target(batch, self.q, self.q_target, self.config.gamma)
        loss = td_loss(self.q, batch, y)
        value = check_finite_loss(loss, "ddqn")
        self.opt.zero_grad()
        loss.backward()
        self.opt.step()
        self.updates += 1
        if self.updates % self.config.target_update_period == 0:
            hard_update(self.q_target, self.q)
        return {"q_loss": value}


def ddqn_update(agent: DDQNAgent, batch: Batch) -> float:
    return agent.update(batch)["q_loss"]
