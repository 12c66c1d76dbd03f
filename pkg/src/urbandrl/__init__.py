"""Desk-scale roundabout driving with bird-view rendering, VAE state encoding
and DDQN / TD3 / SAC agents."""

__version__ = "0.1.0"
