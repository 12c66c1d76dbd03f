"""Simulator wrapper that keeps the history window and renders frames."""

from __future__ import annotations

import numpy as np

from ..drivesim import Action, RoadMap, ScenarioConfig, World, build_roundabout, reset_episode, step_world
from .raster import HistoryBuffer, push_history, render


class BirdViewEnv:
    """Per-frame stepping with bird-view observations.

    ``step_frame`` advances one simulation frame and records a snapshot;
    ``observe`` renders the current window. History snapshots are spaced
    ``config.frame_skip`` frames apart so they sit at the control rate.
    """

    def __init__(self, config: ScenarioConfig, road: RoadMap | None = None):
        self.config = config
        self.road = road or build_roundabout(config.ring_radius, config.arm_length, config.half_width)
        self.history = HistoryBuffer(config.history, config.frame_skip)
        self.world: World | None = None
        self.last_reward = None

    def reset(self, seed: int) -> np.ndarray:
        self.world = reset_episode(self.config, seed, self.road)
        self.history.clear()
        push_history(self.history, self.world)
        return self.observe()

    def step_frame(self, action: Action) -> tuple[float, bool]:
        if self.world is None:
            raise RuntimeError("call reset() before stepping")
        reward, done = step_world(self.world, action)
        push_history(self.history, self.world)
        self.last_reward = reward
        return reward.total, done

    def observe(self) -> np.ndarray:
        return render(self.road, self.history)

    @property
    def done(self) -> bool:
        return self.world is not None and self.world.done
