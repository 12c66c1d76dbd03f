"""Convolutional VAE over 64x64x3 bird-view frames."""

from __future__ import annotations

import numpy as np

from ..ndgrad import Conv2d, ConvTranspose2d, Dense, Module, Tensor, no_grad
from ..ndgrad import load_file, save_file

LATENT_DIM = 64
ENCODER_CHANNELS = (32, 64, 128, 256)
FRAME_SHAPE = (64, 64, 3)
_BOTTLENECK = (256, 4, 4)


class VAE(Module):
    def __init__(self, latent_dim: int = LATENT_DIM, channels=ENCODER_CHANNELS, seed: int = 0,
                 dtype=np.float32):
        rng = np.random.default_rng(seed)
        self.latent_dim = latent_dim
        self.channels = tuple(channels)
        c_prev = FRAME_SHAPE[2]
        self.enc = []
        for i, c in enumerate(self.channels):
            layer = Conv2d(c_prev, c, activation="relu", rng=rng)
            setattr(self, f"enc{i}", layer)
            self.enc.append(layer)
            c_prev = c
        side = FRAME_SHAPE[0] // 2 ** len(self.channels)
        self.bottleneck = (c_prev, side, side)
        flat = c_prev * side * side
        self.mean_head = Dense(flat, latent_dim, rng=rng)
        self.log_var_head = Dense(flat, latent_dim, rng=rng)
        self.dec_in = Dense(latent_dim, flat, activation="relu", rng=rng)
        self.dec = []
        outs = list(reversed(self.channels[:-1])) + [FRAME_SHAPE[2]]
        for i, c in enumerate(outs):
            act = "sigmoid" if i == len(outs) - 1 else "relu"
            layer = ConvTranspose2d(c_prev, c, activation=act, rng=rng)
            setattr(self, f"dec{i}", layer)
            self.dec.append(layer)
            c_prev = c
        if dtype != np.float32:
            self.to(dtype)

    def children(self):
        # the lists above alias attribute-registered layers; skip them
        for name, value in vars(self).items():
            if isinstance(value, Module):
                yield name, value

    @property
    def dtype(self):
        return self.mean_head.weight.data.dtype

    def encode(self, frames) -> tuple[Tensor, Tensor]:
        x = as_nchw(frames, self.dtype)
        for layer in self.enc:
            x = layer(x)
        flat = x.reshape(x.shape[0], -1)
        return self.mean_head(flat), self.log_var_head(flat)

    def decode(self, z: Tensor) -> Tensor:
        """Latents (N, d) to frames (N, 3, 64, 64) in [0, 1]."""
        h = self.dec_in(z).reshape(z.shape[0], *self.bottleneck)
        for layer in self.dec:
            h = layer(h)
        return h


def as_nchw(frames, dtype=np.float32) -> Tensor:
    """Accept (H, W, 3) or (N, H, W, 3) frames, float in [0, 1] or uint8."""
    if isinstance(frames, Tensor):
        return frames
    arr = np.asarray(frames)
    if arr.ndim == 3:
        arr = arr[None]
    if arr.shape[1:] != FRAME_SHAPE:
        raise ValueError(f"frames must be (N, 64, 64, 3), got {arr.shape}")
    if arr.dtype == np.uint8:
        arr = arr.astype(dtype) / np.asarray(255.0, dtype=dtype)
    return Tensor(np.ascontiguousarray(arr.transpose(0, 3, 1, 2), dtype=dtype))


def encode(params: VAE, frame) -> tuple[Tensor, Tensor]:
    return params.encode(frame)


def encode_mean(params: VAE, frames) -> np.ndarray:
    """Posterior means as a plain array, without building a graph."""
    with no_grad():
        mean, _ = params.encode(frames)
    return mean.data


def sample_latent(mean, log_var, rng: np.random.Generator):
    """Reparameterized draw ``mean + exp(log_var / 2) * eps``."""
    if isinstance(mean, Tensor):
        eps = rng.standard_normal(mean.shape).astype(mean.data.dtype)
        return mean + (log_var * 0.5).exp() * Tensor(eps)
    mean, log_var = np.asarray(mean, dtype=np.float64), np.asarray(log_var, dtype=np.float64)
    return mean + np.exp(0.5 * log_var) * rng.standard_normal(mean.shape)


def kl_term(mean, log_var):
    """KL divergence to the unit Gaussian, summed over the last axis."""
    if isinstance(mean, Tensor):
        inner = mean * mean + log_var.exp() - 1.0 - log_var
        return inner.sum(axis=-1) * 0.5
    m, lv = np.asarray(mean, dtype=np.float64), np.asarray(log_var, dtype=np.float64)
    return 0.5 * np.sum(m * m + np.exp(lv) - 1.0 - lv, axis=-1)


def reconstruction_sse(recon: Tensor, target: Tensor) -> Tensor:
    diff = recon - target
    return (diff * diff).reshape(recon.shape[0], -1).sum(axis=1)


def elbo_loss(params: VAE, frames, rng: np.random.Generator, return_parts: bool = False):
    """Batch-mean negative ELBO: KL plus sum-of-squares reconstruction."""
    x = as_nchw(frames, params.dtype)
    mean, log_var = params.encode(x)
    z = sample_latent(mean, log_var, rng)
    recon = params.decode(z)
    sse = reconstruction_sse(recon, x)
    kl = kl_term(mean, log_var)
    loss = (sse + kl).mean()
    if return_parts:
        return loss, sse, kl, recon
    return loss


def save_vae(path, vae: VAE, extra: dict | None = None) -> None:
    meta = {"kind": "vae", "latent_dim": vae.latent_dim, "channels": list(vae.channels)}
    meta.update(extra or {})
    save_file(path, vae.state_dict(), meta)


def load_vae(path) -> tuple[VAE, dict]:
    tensors, meta = load_file(path)
    if meta.get("kind") != "vae":
        raise ValueError(f"{path} does not hold a VAE checkpoint")
    vae = VAE(meta["latent_dim"], meta["channels"])
    vae.load_state_dict(tensors)
    return vae, meta
