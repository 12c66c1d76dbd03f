from __future__ import annotations

from dataclasses import asdict, dataclass

from ..kvconfig import format_kv, read_kv, take_fields


@dataclass
class ScenarioConfig:
    ring_radius: float = 20.0
    arm_length: float = 40.0
    half_width: float = 4.0
    n_traffic: int = 10
    dt: float = 0.05
    step_limit: int = 1000        # agent steps
    frame_skip: int = 4
    seed: int = 0
    jitter_pos: float = 0.5
    jitter_heading: float = 0.05
    traffic_speed: float = 6.0
    traffic_speed_spread: float = 1.0
    out_of_lane: float = 5.0
    history: int = 4

    def __post_init__(self):
        if not (0 < self.dt <= 0.1):
            raise ValueError("dt must lie in (0, 0.1]")
        if self.frame_skip < 1 or self.step_limit < 1:
            raise ValueError("frame_skip and step_limit must be positive")
        if self.n_traffic < 0:
            raise ValueError("n_traffic must be non-negative")

    @property
    def frame_limit(self) -> int:
        return self.step_limit * self.frame_skip

    def to_dict(self) -> dict:
        return asdict(self)


def load_scenario(path) -> ScenarioConfig:
    cfg, rest = take_fields(ScenarioConfig, read_kv(path))
    if rest:
        raise ValueError(f"unknown scenario keys: {sorted(rest)}")
    return cfg


def dump_scenario(cfg: ScenarioConfig) -> str:
    return format_kv(cfg.to_dict())
