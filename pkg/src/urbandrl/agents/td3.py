"""TD3: twin critics, target policy smoothing and delayed actor updates."""

from __future__ import annotations

import numpy as np

from ..ndgrad import Adam, Tensor, frozen, no_grad
from .common import Agent, check_finite_loss, hard_update, soft_update
from .config import NoiseSchedule, TrainConfig
from .networks import TD3_HIDDEN, DeterministicActor, QNetwork
from .replay import Batch


def td3_targets(batch: Batch, target_policy, twin_target_qs, gamma: float, noise_std: float = 0.0,
                noise_clip: float = 0.5, rng: np.random.Generator | None = None) -> np.ndarray:
    """``r + gamma * min_i Q'_i(s', a')`` with clipped smoothing noise on a'."""
    with no_grad():
        a_next = np.asarray(_arr(target_policy(batch.next_state)), dtype=np.float64)
        if noise_std > 0.0:
            noise = np.clip(rng.normal(0.0, noise_std, size=a_next.shape), -noise_clip, noise_clip)
            a_next = np.clip(a_next + noise, -1.0, 1.0)
        qs = [np.asarray(_arr(q(batch.next_state, a_next))) for q in twin_target_qs]
    boot = np.minimum.reduce(qs)
    return batch.reward + gamma * (1.0 - batch.done) * boot


def _arr(x):
    return x.data if isinstance(x, Tensor) else x


def critic_loss(q_net: QNetwork, batch: Batch, y: np.ndarray) -> Tensor:
    diff = q_net(batch.state, batch.action) - Tensor(np.asarray(y, dtype=q_net.dtype))
    return (diff * diff).mean()


def actor_loss(actor: DeterministicActor, q_net: QNetwork, states) -> Tensor:
    return -q_net(states, actor(states)).mean()


class TD3Agent(Agent):
    algo = "td3"

    def __init__(self, state_dim: int, config: TrainConfig, action_dim: int = 2,
                 rng: np.random.Generator | None = None, hidden=None, batch_norm: bool = True,
                 noise: NoiseSchedule | None = None, dtype=np.float32):
        self.config = config
        self.rng = rng if rng is not None else np.random.default_rng(0)
        init = np.random.default_rng(self.rng.integers(1 << 31))
        hidden = config.hidden_sizes(TD3_HIDDEN) if hidden is None else hidden
        make_actor = lambda: DeterministicActor(state_dim, action_dim, hidden, batch_norm, rng=init)
        make_q = lambda: QNetwork(state_dim, action_dim, hidden, "leaky_relu", rng=init)
        self.actor, self.actor_target = make_actor(), make_actor()
        self.q1, self.q2 = make_q(), make_q()
        self.q1_target, self.q2_target = make_q(), make_q()
        for online, target in self._pairs():
            if dtype != np.float32:
                online.to(dtype)
                target.to(dtype)
            hard_update(target, online)
            target.requires_grad_(False)
        self.actor_opt = Adam(self.actor.parameters(), learning_rate=config.lr_actor_td3)
        self.q1_opt = Adam(self.q1.parameters(), learning_rate=config.lr_critic_td3)
        self.q2_opt = Adam(self.q2.parameters(), learning_rate=config.lr_critic_td3)
        self.noise = noise or NoiseSchedule((config.noise_delta_accel, config.noise_delta_steer),
                                            config.noise_decay_steps, config.noise_path_length)
        self.action_dim = action_dim
        self.updates = 0

    def _pairs(self):
        return ((self.actor, self.actor_target), (self.q1, self.q1_target), (self.q2, self.q2_target))

    def modules(self):
        return {"actor": self.actor, "actor_target": self.actor_target, "q1": self.q1, "q2": self.q2,
                "q1_target": self.q1_target, "q2_target": self.q2_target}

    def policy(self, state) -> np.ndarray:
        # single states go through running batch-norm statistics
        self.actor.eval()
        with no_grad():
            out = self.actor(state).data
        self.actor.train()
        return out

    def act(self, state, explore: bool, step: int = 0, path_step: int = 0) -> np.ndarray:
        a = self.policy(state)[0].astype(np.float64)
        if explore:
            sigma = np.asarray(self.noise.normalized_sigma(step, min(path_step, self.noise.path_length)))
            a = np.clip(a + sigma * self.rng.standard_normal(a.shape), -1.0, 1.0)
        return a

    def _target_policy(self, s):
        self.actor_target.eval()
        out = self.actor_target(s)
        self.actor_target.train()
        return out

    def update(self, batch: Batch) -> dict[str, float]:
        c = self.config
        y = td3_targets(batch, self._target_policy, (self.q1_target, self.q2_target), c.gamma,
                        c.target_noise, c.target_noise_clip, self.rng)
        out = {}
        for name, q, opt in (("q1_loss", self.q1, self.q1_opt), ("q2_loss", self.q2, self.q2_opt)):
            loss = critic_loss(q, batch, y)
            out[name] = check_finite_loss(loss, "td3 critic")
            opt.zero_grad()
            loss.backward()
            opt.step()
        self.updates += 1
        if self.updates % c.policy_delay == 0:
            with frozen(self.q1):
                loss = actor_loss(self.actor, self.q1, batch.state)
                out["actor_loss"] = check_finite_loss(loss, "td3 actor")
                self.actor_opt.zero_grad()
                loss.backward()
            self.actor_opt.step()
            for online, target in self._pairs():
                soft_update(target, online, c.tau)
        return out


def td3_update(agent: TD3Agent, batch: Batch, step: int | None = None) -> dict[str, float]:
    if step is not None:
        agent.updates = step - 1
    return agent.update(batch)
