"""Greedy evaluation and checkpoint success rates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..agents import Agent, frame_skip_step
from ..drivesim import CHECKPOINTS, ScenarioConfig, reset_episode, step_world
from .seeding import draw_seed


@dataclass
class EvalReport:
    average_return: float
    rates: dict[str, float]
    episodes: int
    returns: list[float] = field(default_factory=list)

    def __post_init__(self):
        vals = [self.rates[name] for name in CHECKPOINTS]
        if any(not (0.0 <= v <= 1.0) for v in vals):
            raise ValueError(f"success rates outside [0, 1]: {vals}")
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"success rates not ordered along the route: {vals}")

    def rate_list(self) -> list[float]:
        return [self.rates[name] for name in CHECKPOINTS]


def aggregate(returns, flags) -> EvalReport:
    flags = np.asarray(flags, dtype=bool).reshape(len(returns), len(CHECKPOINTS))
    rates = {name: float(flags[:, i].mean()) for i, name in enumerate(CHECKPOINTS)}
    return EvalReport(float(np.mean(returns)), rates, len(returns), [float(r) for r in returns])


def episode_seeds(seed: int, n: int) -> list[int]:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0xE7A1,)))
    return [draw_seed(rng) for _ in range(n)]


def evaluate_agent(agent: Agent, env, n_episodes: int, seed: int) -> EvalReport:
    """Roll out the noiseless policy; ``env`` is a LatentDrivingEnv."""
    k = env.scenario.frame_skip
    returns, flags = [], []
    for s in episode_seeds(seed, n_episodes):
        obs, total, done = env.reset(s), 0.0, False
        while not done:
            obs, r, done, _ = frame_skip_step(env, agent.act(obs, explore=False), k)
            total += r
        returns.append(total)
        flags.append(env.progress_flags())
    return aggregate(returns, flags)


def evaluate_controller(controller_factory, scenario: ScenarioConfig, n_episodes: int, seed: int) -> EvalReport:
    """Evaluate a scripted physical-action controller directly on the world.

    ``controller_factory(world)`` returns a callable mapping ego state to Action.
    """
    returns, flags = [], []
    for s in episode_seeds(seed, n_episodes):
        world = reset_episode(scenario, s)
        ctrl = controller_factory(world)
        total = 0.0
        while not world.done:
            action = ctrl(world.ego)
            for _ in range(scenario.frame_skip):
                r, done = step_world(world, action)
                total += r.total
                if done:
                    break
        returns.append(total)
        flags.append(world.progress.flags())
    return aggregate(returns, flags)
