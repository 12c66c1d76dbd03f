"""Append-only CSV metric log with an exponentially smoothed return."""

from __future__ import annotations

import csv
import math
from pathlib import Path

METRIC_FIELDS = ("step", "episode", "return", "return_smoothed", "success_entrance", "success_first",
                 "success_second", "success_desired", "success_goal")
SMOOTHING = 0.9


class EMA:
    """``s <- f * s + (1 - f) * x``, started at the first observation."""

    def __init__(self, factor: float = SMOOTHING):
        self.factor = factor
        self.value: float | None = None

    def update(self, x: float) -> float:
        self.value = x if self.value is None else self.factor * self.value + (1.0 - self.factor) * x
        return self.value


def smoothed(values, factor: float = SMOOTHING) -> list[float]:
    ema = EMA(factor)
    return [ema.update(v) for v in values]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


class MetricsLogger:
    def __init__(self, path, factor: float = SMOOTHING):
        self.path = Path(path)
        self._ema = EMA(factor)
        self._last_step: int | None = None
        self._fh = open(self.path, "w", newline="")
        self._w = csv.writer(self._fh, lineterminator="\n")
        self._w.writerow(METRIC_FIELDS)
        self._fh.flush()

    def log(self, step: int, episode: int, ret: float, rates=None) -> dict:
        """Write one row; ``rates`` holds five checkpoint success rates or None."""
        if self._last_step is not None and step <= self._last_step:
            raise ValueError(f"metric steps must increase: {step} after {self._last_step}")
        if not math.isfinite(ret):
            raise ValueError(f"non-finite return {ret} at step {step}")
        self._last_step = step
        sm = self._ema.update(float(ret))
        cells = [step, episode, float(ret), sm] + (list(map(float, rates)) if rates is not None else [None] * 5)
        self._w.writerow([_fmt(c) for c in cells])
        self._fh.flush()
        return dict(zip(METRIC_FIELDS, cells))

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


def log_metrics(path, records) -> Path:
    """Write a whole stream of ``(step, episode, return, rates)`` records."""
    with MetricsLogger(path) as out:
        for rec in records:
            out.log(*rec)
    return Path(path)


def read_metrics(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        out.append({k: (float(v) if v != "" else None) if k not in ("step", "episode") else int(v)
                    for k, v in row.items()})
    return out
