"""Frame-skip wrapper and two small tasks with known optimal behaviour.

Environments follow a per-frame protocol: ``reset(seed) -> obs``,
``step_frame(action) -> (reward, done)`` and ``observe() -> obs``.
"""

from __future__ import annotations

import math

import numpy as np


def frame_skip_step(env, action, k: int):
    """Hold ``action`` for up to ``k`` frames, summing rewards.

    Returns ``(obs, reward, done, frames_run)``.
    """
    if k < 1:
        raise ValueError("frame skip k must be at least 1")
    total, done, frames = 0.0, False, 0
    for _ in range(k):
        r, done = env.step_frame(action)
        total += r
        frames += 1
        if done:
            break
    return env.observe(), total, done, frames


class ChainMDP:
    """Deterministic 5-state chain with actions left (0) and right (1).

    Moving right out of the last state pays 1 and ends the episode; staying
    put at the left end by pushing left pays ``stay_reward``.
    """

    n_states = 5
    n_actions = 2

    def __init__(self, stay_reward: float = 0.08, max_steps: int = 50):
        self.stay_reward = stay_reward
        self.max_steps = max_steps
        self.rng = np.random.default_rng(0)
        self.s = 0
        self.t = 0
        self.finished = False

    @property
    def truncated(self) -> bool:
        return self.t >= self.max_steps and not self.finished

    def transition(self, s: int, a: int) -> tuple[int, float, bool]:
        if a == 1:
            if s == self.n_states - 1:
                return s, 1.0, True
            return s + 1, 0.0, False
        if s == 0:
            return 0, self.stay_reward, False
        return s - 1, 0.0, False

    def value_iteration(self, gamma: float, tol: float = 1e-12) -> np.ndarray:
        q = np.zeros((self.n_states, self.n_actions))
        while True:
            new = np.empty_like(q)
            for s in range(self.n_states):
                for a in range(self.n_actions):
                    s2, r, done = self.transition(s, a)
                    new[s, a] = r + (0.0 if done else gamma * q[s2].max())
            if np.abs(new - q).max() < tol:
                return new
            q = new

    def one_hot(self, s: int) -> np.ndarray:
        v = np.zeros(self.n_states, dtype=np.float32)
        v[s] = 1.0
        return v

    def reset(self, seed: int) -> np.ndarray:
        self.rng = np.random.default_rng(seed)
        self.s = int(self.rng.integers(self.n_states))
        self.t = 0
        self.finished = False
        return self.observe()

    def step_frame(self, action) -> tuple[float, bool]:
        self.s, r, self.finished = self.transition(self.s, int(action))
        self.t += 1
        return r, self.finished or self.t >= self.max_steps

    def observe(self) -> np.ndarray:
        return self.one_hot(self.s)


class PointMass:
    """Unit mass on a line, force in [-1, 1], reward ``-|x|`` per step.

    The episode ends (terminally) once the mass settles inside the goal box
    ``|x| < goal_tol, |v| < speed_tol``; otherwise it is truncated at
    ``horizon`` steps.
    """

    state_dim = 2
    action_dim = 1

    def __init__(self, dt: float = 0.1, horizon: int = 100, max_force: float = 1.0, start_range: float = 1.0,
                 goal_tol: float = 0.05, speed_tol: float = 0.1):
        self.dt = dt
        self.horizon = horizon
        self.max_force = max_force
        self.start_range = start_range
        self.goal_tol = goal_tol
        self.speed_tol = speed_tol
        self.x = self.v = 0.0
        self.t = 0
        self.at_goal = False

    @property
    def truncated(self) -> bool:
        return self.t >= self.horizon and not self.at_goal

    def reset(self, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        self.x = float(rng.uniform(-self.start_range, self.start_range))
        self.v = 0.0
        self.t = 0
        self.at_goal = False
        return self.observe()

    def step_frame(self, action) -> tuple[float, bool]:
        u = float(np.clip(np.asarray(action, dtype=np.float64).reshape(-1)[0], -1.0, 1.0)) * self.max_force
        self.v += u * self.dt
        self.x += self.v * self.dt
        self.t += 1
        self.at_goal = abs(self.x) < self.goal_tol and abs(self.v) < self.speed_tol
        return -abs(self.x), self.at_goal or self.t >= self.horizon

    def observe(self) -> np.ndarray:
        return np.array([self.x, self.v], dtype=np.float32)


class PDController:
    """Saturated PD law; with these gains the closed loop is critically
    damped (poles at -sqrt(kp))."""

    def __init__(self, kp: float = 4.0, kd: float = 4.0):
        self.kp, self.kd = kp, kd

    def __call__(self, obs) -> np.ndarray:
        x, v = float(obs[0]), float(obs[1])
        return np.array([min(max(-self.kp * x - self.kd * v, -1.0), 1.0)])


def rollout_return(env, policy, seed: int, frame_skip: int = 1) -> float:
    obs = env.reset(seed)
    total, done = 0.0, False
    while not done:
        obs, r, done, _ = frame_skip_step(env, policy(obs), frame_skip)
        total += r
    return total


def mean_return(make_env, policy, seeds, frame_skip: int = 1) -> float:
    return float(np.mean([rollout_return(make_env(), policy, s, frame_skip) for s in seeds]))


def normalized_score(value: float, baseline: float, oracle: float) -> float:
    """Fraction of the gap from ``baseline`` to ``oracle`` that was closed."""
    if math.isclose(oracle, baseline):
        raise ValueError("oracle and baseline coincide")
    return (value - baseline) / (oracle - baseline)
