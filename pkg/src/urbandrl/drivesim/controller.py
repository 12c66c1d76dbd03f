"""Scripted pure-pursuit route follower."""

from __future__ import annotations

import math

import numpy as np

from .geometry import Polyline, wrap_angle
from .vehicle import ACC_MAX, STEER_MAX, WHEELBASE, Action, VehicleState


class PurePursuit:
    def __init__(self, route: Polyline, lookahead: float = 6.0, target_speed: float = 5.0,
                 speed_gain: float = 1.5, steer_noise: float = 0.0, accel_noise: float = 0.0,
                 rng: np.random.Generator | None = None):
        self.route = route
        self.lookahead = lookahead
        self.target_speed = target_speed
        self.speed_gain = speed_gain
        self.steer_noise = steer_noise
        self.accel_noise = accel_noise
        self.rng = rng or np.random.default_rng(0)

    def __call__(self, ego: VehicleState) -> Action:
        s, _ = self.route.project(ego.x, ego.y)
        tx, ty, _ = self.route.pose_at(s + self.lookahead)
        alpha = wrap_angle(math.atan2(ty - ego.y, tx - ego.x) - ego.heading)
        ld = max(math.hypot(tx - ego.x, ty - ego.y), 1e-3)
        steer = math.atan2(2.0 * WHEELBASE * math.sin(alpha), ld)
        accel = self.speed_gain * (self.target_speed - ego.speed)
        if self.steer_noise:
            steer += self.steer_noise * self.rng.normal()
        if self.accel_noise:
            accel += self.accel_noise * self.rng.normal()
        return Action(float(np.clip(accel, -ACC_MAX, ACC_MAX)), float(np.clip(steer, -STEER_MAX, STEER_MAX)))
