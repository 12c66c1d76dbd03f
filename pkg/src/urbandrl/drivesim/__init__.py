"""Deterministic 2-D roundabout world with scripted traffic."""

from .config import ScenarioConfig, dump_scenario, load_scenario
from .controller import PurePursuit
from .geometry import Polyline, boxes_overlap, box_corners, wrap_angle
from .roadmap import CHECKPOINTS, RoadMap, build_roundabout
from .traffic import TrafficVehicle, front_gap, spawn_traffic, step_traffic
from .vehicle import ACC_MAX, STEER_MAX, V_MAX, WHEELBASE, Action, VehicleState, step_ego
from .world import (
    CheckpointProgress,
    RewardBreakdown,
    TrajectoryWriter,
    World,
    check_collision,
    compute_reward,
    lane_deviation,
    reset_episode,
    reward_terms,
    step_world,
    traffic_overlaps,
    update_progress,
)

__all__ = [
    "ACC_MAX", "Action", "CHECKPOINTS", "CheckpointProgress", "Polyline", "PurePursuit", "RewardBreakdown",
    "RoadMap", "STEER_MAX", "ScenarioConfig", "TrafficVehicle", "TrajectoryWriter", "V_MAX", "VehicleState",
    "WHEELBASE", "World", "box_corners", "boxes_overlap", "build_roundabout", "check_collision",
    "compute_reward", "dump_scenario", "front_gap", "lane_deviation", "load_scenario", "reset_episode",
    "reward_terms", "spawn_traffic", "step_ego", "step_traffic", "step_world", "traffic_overlaps",
    "update_progress", "wrap_angle",
]
