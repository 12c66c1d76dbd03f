"""Latent-state encoding: convolutional VAE, data collection and training."""

from .training import DivergenceError, EpochStats, collect_dataset, smooth_curve, train_vae
from .vae import (FRAME_SHAPE, LATENT_DIM, VAE, as_nchw, elbo_loss, encode, encode_mean, kl_term, load_vae,
                  reconstruction_sse, sample_latent, save_vae)

__all__ = [
    "DivergenceError", "EpochStats", "FRAME_SHAPE", "LATENT_DIM", "VAE", "as_nchw", "collect_dataset",
    "elbo_loss", "encode", "encode_mean", "kl_term", "load_vae", "reconstruction_sse", "sample_latent",
    "save_vae", "smooth_curve", "train_vae",
]
