"""Hyper-parameters shared by the learners and the exploration schedules."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass


@dataclass
class TrainConfig:
    gamma: float = 0.99
    tau: float = 0.005
    batch_size: int = 64
    buffer_capacity: int = 100_000
    frame_skip: int = 4
    warmup_steps: int = 1000          # agent steps before the first update
    updates_per_step: int = 1
    # ddqn
    lr_q_ddqn: float = 1e-3
    target_update_period: int = 1000   # updates between hard copies
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay_steps: int = 50_000
    exploration_temperature: float = 1.0
    # td3
    lr_actor_td3: float = 1e-4
    lr_critic_td3: float = 1e-3
    policy_delay: int = 2
    target_noise: float = 0.2
    target_noise_clip: float = 0.5
    noise_delta_accel: float = 0.5
    noise_delta_steer: float = 0.1
    noise_decay_steps: int = 100_000
    noise_path_length: int = 500
    # sac
    lr_sac: float = 3e-4
    alpha_ent: float = 0.2
    # network widths; empty means the architecture defaults
    hidden: str = ""

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not (0.0 < self.tau <= 1.0):
            raise ValueError(f"tau must lie in (0, 1], got {self.tau}")
        if self.frame_skip < 1:
            raise ValueError("frame_skip must be at least 1")
        if self.batch_size < 2:
            raise ValueError("batch_size must be at least 2 (batch statistics)")
        if self.policy_delay < 1 or self.target_update_period < 1:
            raise ValueError("update periods must be positive")

    def hidden_sizes(self, default: tuple[int, ...]) -> tuple[int, ...]:
        if not self.hidden:
            return default
        return tuple(int(h) for h in self.hidden.replace(",", " ").split())

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class NoiseSchedule:
    """Time-varying Gaussian exploration scale for continuous actions.

    ``delta`` is given in physical action units and ``action_scale`` maps it
    to the normalized [-1, 1] range the actor emits.
    """

    delta: tuple[float, ...] = (0.5, 0.1)
    decay_steps: int = 100_000
    path_length: int = 500
    action_scale: tuple[float, ...] = (3.0, 0.5)

    def factors(self, t: float, t_p: float) -> tuple[float, float, float]:
        T, Tp = self.decay_steps, self.path_length
        lam_t = max(0.5, 1.0 - t / T)
        lam_d = max(1.0 - t / T, 0.2 + t_p / Tp)
        lam_p = 1.0 + math.sin(5.0 * math.pi * t / T + math.pi / 2.0)
        return lam_t, lam_d, lam_p

    def sigma(self, t: float, t_p: float, dim: int) -> float:
        if t < 0 or t_p < 0:
            raise ValueError("t and t_p must be non-negative")
        lam_t, lam_d, lam_p = self.factors(t, t_p)
        # sin rounding can leave lam_p a hair below zero at its troughs
        return self.delta[dim] * lam_t * lam_d * max(lam_p, 0.0)

    def normalized_sigma(self, t: float, t_p: float) -> list[float]:
        return [self.sigma(t, t_p, d) / self.action_scale[d] for d in range(len(self.delta))]


def exploration_sigma(schedule: NoiseSchedule, t: float, t_p: float, dim: int) -> float:
    return schedule.sigma(t, t_p, dim)


def linear_epsilon(step: int, start: float, end: float, decay_steps: int) -> float:
    if decay_steps <= 0 or step >= decay_steps:
        return end
    frac = min(max(step / decay_steps, 0.0), 1.0)
    return start + frac * (end - start)
