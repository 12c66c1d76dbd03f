"""World state, reward terms, checkpoint progress and the per-frame step."""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .config import ScenarioConfig
from .geometry import Polyline, boxes_overlap, wrap_angle
from .roadmap import CHECKPOINTS, RoadMap, build_roundabout
from .traffic import TrafficVehicle, spawn_traffic, step_traffic
from .vehicle import Action, VehicleState, step_ego

ROUTE_PENALTY_DISTANCE = 2.0
CHECKPOINT_RADIUS = 5.0


@dataclass(frozen=True)
class RewardBreakdown:
    r_v: float
    r_alpha: float
    r_c: float
    r_o: float
    c: float

    @property
    def total(self) -> float:
        return self.r_v + self.r_alpha + self.r_c + self.r_o + self.c


@dataclass
class CheckpointProgress:
    entrance: bool = False
    first_exit: bool = False
    second_exit: bool = False
    desired_exit: bool = False
    goal_point: bool = False

    def flags(self) -> tuple[bool, ...]:
        return tuple(getattr(self, name) for name in CHECKPOINTS)

    def reached(self) -> int:
        return sum(self.flags())

    def copy(self) -> "CheckpointProgress":
        return CheckpointProgress(*self.flags())


@dataclass
class World:
    config: ScenarioConfig
    road: RoadMap
    ego: VehicleState
    traffic: list[TrafficVehicle]
    rng: np.random.Generator
    progress: CheckpointProgress = field(default_factory=CheckpointProgress)
    frame: int = 0
    done: bool = False
    termination: str = ""
    check_invariants: bool = False

    @property
    def route(self) -> Polyline:
        return self.road.route


def check_collision(world: World) -> bool:
    ego = world.ego.box()
    return any(boxes_overlap(ego, v.box()) for v in world.traffic)


def lane_deviation(ego: VehicleState, route: Polyline) -> float:
    return route.distance(ego.x, ego.y)


def reward_terms(speed: float, steer: float, collided: bool, deviation: float) -> RewardBreakdown:
    r_v = speed if speed <= 5.0 else 10.0 - speed
    return RewardBreakdown(
        r_v=r_v,
        r_alpha=-0.5 * steer * steer,
        r_c=-10.0 if collided else 0.0,
        r_o=-1.0 if deviation > ROUTE_PENALTY_DISTANCE else 0.0,
        c=-0.1,
    )


def compute_reward(world: World, action: Action) -> RewardBreakdown:
    act = action.clamped()
    return reward_terms(world.ego.speed, act.steer, check_collision(world),
                        lane_deviation(world.ego, world.route))


def update_progress(progress: CheckpointProgress, ego: VehicleState, road: RoadMap) -> CheckpointProgress:
    """Set the next unreached checkpoint flag(s) whose trigger disc holds the ego."""
    out = progress.copy()
    for name in CHECKPOINTS:
        if getattr(out, name):
            continue
        cx, cy = road.checkpoints[name]
        if math.hypot(ego.x - cx, ego.y - cy) <= CHECKPOINT_RADIUS:
            setattr(out, name, True)
        else:
            break
    return out


def spawn_pose(road: RoadMap) -> tuple[float, float, float]:
    x, y, h = road.route.pose_at(0.0)
    return x, y, h


@functools.lru_cache(maxsize=8)
def _road(ring_radius: float, arm_length: float, half_width: float) -> RoadMap:
    return build_roundabout(ring_radius, arm_length, half_width)


def reset_episode(config: ScenarioConfig, seed: int, road: RoadMap | None = None) -> World:
    road = road or _road(config.ring_radius, config.arm_length, config.half_width)
    ss = np.random.SeedSequence(seed)
    ego_ss, traffic_ss, sim_ss = ss.spawn(3)
    ego_rng = np.random.default_rng(ego_ss)
    x, y, h = spawn_pose(road)
    # lateral/longitudinal jitter in the route frame
    dx, dy = ego_rng.uniform(-config.jitter_pos, config.jitter_pos, size=2)
    dh = ego_rng.uniform(-config.jitter_heading, config.jitter_heading)
    ego = VehicleState(x + dx, y + dy, wrap_angle(h + dh), 0.0)
    traffic = spawn_traffic(road, config.n_traffic, np.random.default_rng(traffic_ss),
                            cruise=config.traffic_speed, spread=config.traffic_speed_spread,
                            exclude=(x, y, 12.0))
    world = World(config, road, ego, traffic, np.random.default_rng(sim_ss))
    world.progress = update_progress(world.progress, ego, road)
    return world


def traffic_overlaps(world: World) -> list[tuple[int, int]]:
    boxes = [v.box() for v in world.traffic]
    return [(i, j) for i in range(len(boxes)) for j in range(i + 1, len(boxes))
            if boxes_overlap(boxes[i], boxes[j])]


def step_world(world: World, action: Action) -> tuple[RewardBreakdown, bool]:
    """One simulation frame: ego, then traffic, then reward and termination."""
    if world.done:
        raise RuntimeError("episode already terminated; call reset_episode")
    cfg = world.config
    act = action.clamped()
    world.ego = step_ego(world.ego, act, cfg.dt)
    step_traffic(world.road, world.traffic, world.ego.box(), cfg.dt, world.rng)
    if world.check_invariants:
        bad = traffic_overlaps(world)
        if bad:
            raise AssertionError(f"traffic overlap after step: {bad}")
    world.frame += 1
    collided = check_collision(world)
    deviation = lane_deviation(world.ego, world.route)
    reward = reward_terms(world.ego.speed, act.steer, collided, deviation)
    world.progress = update_progress(world.progress, world.ego, world.road)
    if collided:
        world.termination = "collision"
    elif deviation > cfg.out_of_lane:
        world.termination = "out_of_lane"
    elif world.progress.goal_point:
        world.termination = "goal"
    elif world.frame >= cfg.frame_limit:
        world.termination = "step_limit"
    world.done = bool(world.termination)
    return reward, world.done


TRAJECTORY_FIELDS = ["step", "x", "y", "heading", "speed", "r_v", "r_alpha", "r_c", "r_o", "c", "total",
                     *CHECKPOINTS]


class TrajectoryWriter:
    """CSV dump of one episode, one row per simulation frame."""

    def __init__(self, path):
        self._fh = open(path, "w", newline="")
        self._w = csv.writer(self._fh)
        self._w.writerow(TRAJECTORY_FIELDS)

    def write(self, world: World, reward: RewardBreakdown) -> None:
        e = world.ego
        terms = [getattr(reward, f.name) for f in fields(reward)]
        self._w.writerow([world.frame, f"{e.x:.6f}", f"{e.y:.6f}", f"{e.heading:.6f}", f"{e.speed:.6f}",
                          *(f"{t:.6f}" for t in terms), f"{reward.total:.6f}",
                          *(int(flag) for flag in world.progress.flags())])

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False
