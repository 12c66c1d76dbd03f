"""Learning-curve and success-rate figures from metrics CSVs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..latent import smooth_curve  # noqa: E402
from .metrics import METRIC_FIELDS, read_metrics, smoothed  # noqa: E402

RATE_FIELDS = METRIC_FIELDS[4:]
RATE_LABELS = ("entrance", "first exit", "second exit", "desired exit", "goal point")


def _group(paths) -> dict[str, list[list[dict]]]:
    """Group runs by label; a run's label is the algo directory name if it
    follows ``<algo>/seed<N>/metrics.csv``, otherwise its parent directory."""
    groups: dict[str, list[list[dict]]] = {}
    for p in map(Path, paths):
        rows = read_metrics(p)
        parent = p.parent
        label = parent.parent.name if parent.name.startswith("seed") else parent.name
        groups.setdefault(label or p.stem, []).append(rows)
    return groups


def _stack(runs: list[list[dict]], key: str) -> tuple[np.ndarray, np.ndarray]:
    n = min(len(r) for r in runs)
    steps = np.array([row["step"] for row in runs[0][:n]], dtype=float)
    vals = np.array([[np.nan if row[key] is None else row[key] for row in r[:n]] for r in runs], dtype=float)
    return steps, vals


def plot_returns(paths, out, smoothing: float = 0.9) -> Path:
    """Smoothed mean return per group, shaded by half a standard deviation across seeds."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, runs in sorted(_group(paths).items()):
        steps, vals = _stack(runs, "return")
        if steps.size == 0:
            continue
        curves = np.array([smoothed(v, smoothing) for v in vals])
        mean, half = curves.mean(axis=0), 0.5 * curves.std(axis=0)
        ax.plot(steps, mean, label=f"{label} (n={len(runs)})")
        ax.fill_between(steps, mean - half, mean + half, alpha=0.25)
    ax.set_xlabel("env steps")
    ax.set_ylabel("average return")
    ax.grid(alpha=0.3)
    if ax.lines:
        ax.legend()
    fig.tight_layout()
    out = Path(out)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def plot_success(paths, out) -> Path:
    """Final-evaluation checkpoint success rates, one bar group per label."""
    groups = _group(paths)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    labels = sorted(groups)
    width = 0.8 / max(len(labels), 1)
    x = np.arange(len(RATE_FIELDS))
    drawn = False
    for i, label in enumerate(labels):
        last = [r[-1] for r in groups[label] if r and r[-1][RATE_FIELDS[0]] is not None]
        if not last:
            continue
        rates = np.array([[row[k] for k in RATE_FIELDS] for row in last]).mean(axis=0)
        ax.bar(x + (i - (len(labels) - 1) / 2) * width, 100 * rates, width, label=label)
        drawn = True
    ax.set_xticks(x, RATE_LABELS)
    ax.set_ylabel("success rate (%)")
    ax.set_ylim(0, 100)
    if drawn:
        ax.legend()
    fig.tight_layout()
    out = Path(out)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def plot_vae_history(history, out) -> Path:
    """Per-epoch ELBO with its smoothed curve, plus reconstruction MSE."""
    epochs = [h.epoch for h in history]
    fig, (a, b) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    loss = [h.loss for h in history]
    a.plot(epochs, loss, alpha=0.5, label="loss")
    a.plot(epochs, smooth_curve(loss), label="smoothed")
    a.set_xlabel("epoch")
    a.legend()
    b.plot(epochs, [h.mse for h in history])
    b.set_xlabel("epoch")
    b.set_ylabel("reconstruction MSE")
    fig.tight_layout()
    out = Path(out)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
