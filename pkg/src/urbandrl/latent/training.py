"""Dataset collection with a noisy scripted driver and VAE training."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..birdview import BirdViewEnv, to_bytes, write_dataset
from ..drivesim import PurePursuit, ScenarioConfig
from ..ndgrad import Adam
from .vae import VAE, elbo_loss

log = logging.getLogger(__name__)


def collect_dataset(config: ScenarioConfig, n_frames: int, seed: int = 0, out=None) -> np.ndarray:
    """Record ``n_frames`` uint8 frames, one per control step, from a noisy
    pure-pursuit driver. Episodes restart on termination."""
    if n_frames < 1:
        raise ValueError("n_frames must be at least 1")
    rng = np.random.default_rng(seed)
    env = BirdViewEnv(config)
    frames = np.empty((n_frames, 64, 64, 3), dtype=np.uint8)
    count = 0
    while count < n_frames:
        env.reset(int(rng.integers(1 << 31)))
        driver = PurePursuit(
            env.world.route,
            lookahead=float(rng.uniform(4.0, 9.0)),
            target_speed=float(rng.uniform(3.0, 8.0)),
            steer_noise=float(rng.uniform(0.05, 0.3)),
            accel_noise=1.0,
            rng=np.random.default_rng(rng.integers(1 << 31)),
        )
        while count < n_frames:
            action = driver(env.world.ego)
            done = False
            for _ in range(config.frame_skip):
                _, done = env.step_frame(action)
                if done:
                    break
            frames[count] = to_bytes(env.observe())
            count += 1
            if done:
                break
    if out is not None:
        write_dataset(out, frames)
    return frames


@dataclass
class EpochStats:
    epoch: int
    loss: float
    mse: float
    kl: float


class DivergenceError(RuntimeError):
    pass


def smooth_curve(values, factor: float = 0.5) -> list[float]:
    """Exponential smoothing seeded with the first value."""
    out, acc = [], None
    for v in values:
        acc = v if acc is None else factor * acc + (1.0 - factor) * v
        out.append(acc)
    return out


def train_vae(frames, epochs: int, lr: float = 1e-4, batch_size: int = 64, seed: int = 0,
              vae: VAE | None = None, on_epoch=None) -> tuple[VAE, list[EpochStats]]:
    """Minimize the negative ELBO with Adam; one stats record per epoch."""
    data = np.asarray(frames)
    if len(data) == 0:
        raise ValueError("empty dataset")
    root = np.random.SeedSequence(seed)
    init_ss, order_ss, noise_ss = root.spawn(3)
    vae = vae or VAE(seed=int(init_ss.generate_state(1)[0]))
    order_rng = np.random.default_rng(order_ss)
    noise_rng = np.random.default_rng(noise_ss)
    opt = Adam(vae.parameters(), learning_rate=lr)
    pixels = math.prod(data.shape[1:])
    history: list[EpochStats] = []
    for epoch in range(1, epochs + 1):
        perm = order_rng.permutation(len(data))
        tot_loss = tot_sse = tot_kl = 0.0
        for start in range(0, len(data), batch_size):
            idx = perm[start:start + batch_size]
            try:
                loss, sse, kl, _ = elbo_loss(vae, data[idx], noise_rng, return_parts=True)
            except FloatingPointError as exc:
                raise DivergenceError(f"VAE training diverged in epoch {epoch}: {exc}") from exc
            if not math.isfinite(loss.item()):
                raise DivergenceError(f"VAE loss became {loss.item()} in epoch {epoch}")
            opt.zero_grad()
            loss.backward()
            opt.step()
            tot_loss += loss.item() * len(idx)
            tot_sse += float(sse.data.sum())
            tot_kl += float(kl.data.sum())
        n = len(data)
        stats = EpochStats(epoch, tot_loss / n, tot_sse / (n * pixels), tot_kl / n)
        history.append(stats)
        log.info("epoch %d loss %.3f mse %.5f kl %.3f", epoch, stats.loss, stats.mse, stats.kl)
        if on_epoch is not None:
            on_epoch(stats)
    return vae, history
