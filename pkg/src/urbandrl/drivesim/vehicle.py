"""Ego vehicle state, control command and kinematic bicycle integration."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import wrap_angle

V_MAX = 10.0
ACC_MAX = 3.0
STEER_MAX = 0.5
WHEELBASE = 2.7
CAR_LENGTH = 4.5
CAR_WIDTH = 2.0


@dataclass(frozen=True)
class VehicleState:
    x: float
    y: float
    heading: float
    speed: float = 0.0
    length: float = CAR_LENGTH
    width: float = CAR_WIDTH

    def box(self) -> tuple[float, float, float, float, float]:
        return (self.x, self.y, self.heading, self.length, self.width)


@dataclass(frozen=True)
class Action:
    """Physical command: acceleration (m/s^2) and steering angle (rad)."""

    acceleration: float
    steer: float

    def clamped(self) -> "Action":
        return Action(min(max(self.acceleration, -ACC_MAX), ACC_MAX),
                      min(max(self.steer, -STEER_MAX), STEER_MAX))

    @classmethod
    def from_normalized(cls, a) -> "Action":
        """Affine map from [-1, 1]^2 to the physical ranges."""
        return cls(float(a[0]) * ACC_MAX, float(a[1]) * STEER_MAX).clamped()


def step_ego(state: VehicleState, action: Action, dt: float, wheelbase: float = WHEELBASE) -> VehicleState:
    """Advance the pose along a constant-curvature arc, then update speed.

    The arc is integrated exactly, so a held steering angle traces a circle
    of radius ``wheelbase / tan(steer)``.
    """
    if not (0 < dt <= 0.1):
        raise ValueError(f"dt must lie in (0, 0.1], got {dt}")
    values = (state.x, state.y, state.heading, state.speed, action.acceleration, action.steer)
    if not all(math.isfinite(v) for v in values):
        raise ValueError("non-finite state or action")
    act = action.clamped()
    dist = state.speed * dt
    kappa = math.tan(act.steer) / wheelbase
    dpsi = kappa * dist
    psi = state.heading
    if abs(dpsi) < 1e-12:
        x = state.x + dist * math.cos(psi)
        y = state.y + dist * math.sin(psi)
    else:
        x = state.x + (math.sin(psi + dpsi) - math.sin(psi)) / kappa
        y = state.y + (math.cos(psi) - math.cos(psi + dpsi)) / kappa
    speed = min(max(state.speed + act.acceleration * dt, 0.0), V_MAX)
    return replace(state, x=x, y=y, heading=wrap_angle(psi + dpsi), speed=speed)
