"""Training orchestration, evaluation, metrics, seeding and the CLI."""

from .config import ALGOS, TASKS, RunConfig, dump_run_config, load_run_config, run_config_from_dict
from .env import LatentDrivingEnv, to_physical
from .evaluate import EvalReport, aggregate, episode_seeds, evaluate_agent, evaluate_controller
from .metrics import EMA, METRIC_FIELDS, SMOOTHING, MetricsLogger, log_metrics, read_metrics, smoothed
from .seeding import SeedBank, draw_seed, global_stream, reset_global_seed, set_global_seed
from .train import (TrainingError, TrainResult, build_agent, evaluate, evaluate_pointmass,
                    load_agent_checkpoint, make_env, run_loop, save_agent_checkpoint, train)

__all__ = [
    "ALGOS", "EMA", "EvalReport", "LatentDrivingEnv", "METRIC_FIELDS", "MetricsLogger", "RunConfig", "SMOOTHING",
    "SeedBank", "TASKS", "TrainResult", "TrainingError", "aggregate", "build_agent", "draw_seed",
    "dump_run_config", "episode_seeds", "evaluate", "evaluate_agent", "evaluate_controller",
    "evaluate_pointmass", "global_stream", "load_agent_checkpoint", "load_run_config", "log_metrics",
    "make_env", "read_metrics", "reset_global_seed", "run_config_from_dict", "run_loop",
    "save_agent_checkpoint", "set_global_seed", "smoothed", "to_physical", "train",
]
