"""Run configuration assembled from one flat ``key = value`` file."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from ..agents import TrainConfig
from ..drivesim import ScenarioConfig
from ..kvconfig import format_kv, read_kv, take_fields

ALGOS = ("ddqn", "td3", "sac")
TASKS = ("drive", "pointmass")


@dataclass
class RunConfig:
    algo: str = "sac"
    task: str = "drive"
    total_steps: int = 300_000       # agent (control) steps
    eval_every: int = 5_000
    eval_episodes: int = 10
    seed: int = 0
    out_dir: str = "runs/default"
    vae_checkpoint: str = ""
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    train: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        if self.algo not in ALGOS:
            raise ValueError(f"algo must be one of {ALGOS}, got {self.algo!r}")
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.total_steps < 0 or self.eval_every < 1 or self.eval_episodes < 1:
            raise ValueError("total_steps >= 0, eval_every >= 1 and eval_episodes >= 1 are required")
        if self.scenario.frame_skip != self.train.frame_skip:
            raise ValueError("scenario and training frame skip disagree")

    def flat(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("scenario", "train")}
        out.update({k: v for k, v in self.scenario.to_dict().items() if k != "seed"})
        out.update(self.train.to_dict())
        return out

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **kw)


# keys present in both sub-configs; one value drives both
_SHARED = ("frame_skip",)


def run_config_from_dict(values: dict, base_dir: Path | None = None) -> RunConfig:
    values = dict(values)
    shared = {k: values[k] for k in _SHARED if k in values}
    run, rest = take_fields(RunConfig, {k: v for k, v in values.items() if k not in ("scenario", "train")})
    scenario, rest = take_fields(ScenarioConfig, {**rest, **shared})
    rest.pop("seed", None)
    train, rest = take_fields(TrainConfig, {**rest, **shared})
    for k in _SHARED:
        rest.pop(k, None)
    if rest:
        raise ValueError(f"unknown config keys: {sorted(rest)}")
    run.scenario = replace(scenario, seed=run.seed)
    run.train = train
    if base_dir is not None and run.vae_checkpoint:
        p = Path(run.vae_checkpoint)
        if not p.is_absolute():
            run.vae_checkpoint = str((base_dir / p).resolve())
    run.__post_init__()
    return run


def load_run_config(path) -> RunConfig:
    path = Path(path)
    return run_config_from_dict(read_kv(path), path.parent)


def dump_run_config(cfg: RunConfig) -> str:
    return format_kv(cfg.flat())
