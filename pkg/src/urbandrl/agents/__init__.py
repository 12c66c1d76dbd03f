"""Off-policy learners (DDQN, TD3, SAC), replay, exploration and toy tasks."""

import numpy as np

from ..ndgrad import no_grad

from .common import Agent, hard_update, soft_update
from .config import NoiseSchedule, TrainConfig, exploration_sigma, linear_epsilon
from .ddqn import (ACTION_GRID, DDQNAgent, ddqn_target, ddqn_update, dqn_target, grid_action,
                   q_weighted_exploration, td_loss)
from .envs import (ChainMDP, PDController, PointMass, frame_skip_step, mean_return, normalized_score,
                   rollout_return)
from .networks import (DDQN_HIDDEN, SAC_HIDDEN, TD3_HIDDEN, DeterministicActor, GaussianPolicy, QNetwork,
                       ValueNetwork, mlp, squashed_gaussian_log_prob)
from .replay import Batch, ReplayBuffer, buffer_push, buffer_sample
from .sac import SACAgent, sac_policy_loss, sac_q_target, sac_value_target, soft_value
from .td3 import TD3Agent, actor_loss, critic_loss, td3_targets, td3_update

ALGORITHMS = {"ddqn": DDQNAgent, "td3": TD3Agent, "sac": SACAgent}


def make_agent(algo: str, state_dim: int, config: TrainConfig, rng=None, **kwargs) -> Agent:
    try:
        cls = ALGORITHMS[algo]
    except KeyError:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {sorted(ALGORITHMS)}") from None
    return cls(state_dim, config, rng=rng, **kwargs)


def policy_heads(latent, algo: str, agent: Agent):
    """Raw network heads for a batch of latent states.

    ddqn: Q-values (N, |A|); td3: actions (N, 2) in [-1, 1];
    sac: stacked (mean, log_std) of shape (N, 2, action_dim).
    """
    with no_grad():
        if algo == "ddqn":
            return agent.q(latent).data
        if algo == "td3":
            return agent.policy(latent)
        if algo == "sac":
            mean, log_std = agent.policy.heads(latent)
            return np.stack([mean.data, log_std.data], axis=1)
    raise ValueError(f"unknown algorithm {algo!r}")


__all__ = [
    "ACTION_GRID", "ALGORITHMS", "Agent", "Batch", "ChainMDP", "DDQNAgent", "DDQN_HIDDEN",
    "DeterministicActor", "GaussianPolicy", "NoiseSchedule", "PDController", "PointMass", "QNetwork",
    "ReplayBuffer", "SACAgent", "SAC_HIDDEN", "TD3Agent", "TD3_HIDDEN", "TrainConfig", "ValueNetwork",
    "actor_loss", "buffer_push", "buffer_sample", "critic_loss", "ddqn_target", "ddqn_update", "dqn_target",
    "exploration_sigma", "frame_skip_step", "grid_action", "hard_update", "linear_epsilon", "make_agent",
    "mean_return", "mlp", "normalized_score", "policy_heads", "q_weighted_exploration", "rollout_return",
    "sac_policy_loss", "sac_q_target", "sac_value_target", "soft_update", "soft_value",
    "squashed_gaussian_log_prob", "td3_targets", "td3_update", "td_loss",
]
