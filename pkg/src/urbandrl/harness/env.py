"""Driving task as seen by a learner: latent observations, agent-space actions."""

from __future__ import annotations

import numpy as np

from ..agents import grid_action
from ..birdview import BirdViewEnv
from ..drivesim import Action, ScenarioConfig
from ..latent import VAE, encode_mean


def to_physical(action, discrete: bool) -> Action:
    if discrete:
        return Action(*grid_action(int(action)))
    return Action.from_normalized(np.asarray(action, dtype=np.float64).reshape(-1))


class LatentDrivingEnv:
    """Per-frame driving env whose observation is the VAE posterior mean.

    Without an encoder the observation is the raw 64x64x3 frame; with
    ``render=False`` no frame is drawn at all (zeros), which keeps pure
    control-flow checks cheap.
    """

    def __init__(self, scenario: ScenarioConfig, vae: VAE | None, discrete: bool, render: bool = True):
        self.scenario = scenario
        self.inner = BirdViewEnv(scenario)
        self.vae = vae
        self.discrete = discrete
        self.render = render
        self.frames = 0
        self.state_dim = vae.latent_dim if vae is not None else 64 * 64 * 3

    @property
    def world(self):
        return self.inner.world

    def reset(self, seed: int) -> np.ndarray:
        self.inner.reset(seed)
        self.frames = 0
        return self.observe()

    def step_frame(self, action) -> tuple[float, bool]:
        reward, done = self.inner.step_frame(to_physical(action, self.discrete))
        self.frames += 1
        return reward, done

    def observe(self) -> np.ndarray:
        if not self.render:
            return np.zeros(self.state_dim, dtype=np.float32)
        frame = self.inner.observe()
        if self.vae is None:
            return frame.reshape(-1)
        return encode_mean(self.vae, frame)[0].astype(np.float32)

    @property
    def truncated(self) -> bool:
        """Episode ended by the step limit rather than a terminal event."""
        return self.world.termination == "step_limit"

    def progress_flags(self) -> tuple[bool, ...]:
        return self.world.progress.flags()
