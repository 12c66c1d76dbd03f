"""Interact / store / update orchestration with periodic evaluation."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..agents import (Agent, NoiseSchedule, PointMass, ReplayBuffer, TrainConfig, frame_skip_step, make_agent)
from ..agents.ddqn import ACTION_GRID
from ..drivesim import ScenarioConfig
from ..latent import VAE, load_vae
from ..ndgrad import load_file, save_file
from .config import RunConfig, dump_run_config, run_config_from_dict
from .env import LatentDrivingEnv
from .evaluate import EvalReport, episode_seeds, evaluate_agent
from .metrics import MetricsLogger
from .seeding import SeedBank, draw_seed

log = logging.getLogger(__name__)

CHECKPOINT_NAME = "checkpoint.ndgr"
METRICS_NAME = "metrics.csv"


class TrainingError(RuntimeError):
    pass


@dataclass
class TrainResult:
    checkpoint: Path
    metrics: Path
    rows: list[dict]


def _random_action(agent: Agent, rng: np.random.Generator, action_dim: int):
    if agent.discrete:
        return int(rng.integers(agent.n_actions))
    return rng.uniform(-1.0, 1.0, size=action_dim)


def run_loop(agent: Agent, env, train_cfg: TrainConfig, total_steps: int, frame_skip: int,
             bank: SeedBank, evaluate_fn, eval_every: int, logger: MetricsLogger | None = None,
             on_eval=None, action_dim: int = 2) -> list[dict]:
    """Generic off-policy loop over agent steps.

    ``evaluate_fn(step) -> (average_return, rates_or_None)``; a truthy
    ``on_eval(step, row)`` ends training early. Time-limit endings are
    stored as non-terminal so the critic keeps bootstrapping.
    """
    env_rng, warm_rng = bank.stream("episodes"), bank.stream("warmup")
    state_dim = int(np.asarray(env.reset(draw_seed(env_rng))).size)
    buf = ReplayBuffer(train_cfg.buffer_capacity, state_dim, () if agent.discrete else (action_dim,),
                       discrete=agent.discrete, rng=bank.stream("replay"))
    obs = env.observe()
    episode, path_step, rows = 0, 0, []
    for step in range(1, total_steps + 1):
        if step <= train_cfg.warmup_steps:
            action = _random_action(agent, warm_rng, action_dim)
        else:
            action = agent.act(obs, explore=True, step=step, path_step=path_step)
        next_obs, reward, done, _ = frame_skip_step(env, action, frame_skip)
        terminal = done and not getattr(env, "truncated", False)
        buf.push(obs, action, reward, next_obs, terminal)
        obs, path_step = next_obs, path_step + 1
        if done:
            episode += 1
            path_step = 0
            obs = env.reset(draw_seed(env_rng))
        if step > train_cfg.warmup_steps and len(buf) >= train_cfg.batch_size:
            for _ in range(train_cfg.updates_per_step):
                try:
                    agent.update(buf.sample(train_cfg.batch_size))
                except FloatingPointError as exc:
                    raise TrainingError(f"{agent.algo} update diverged at step {step}: {exc}") from exc
        if step % eval_every == 0:
            ret, rates = evaluate_fn(step)
            row = logger.log(step, episode, ret, rates) if logger else {"step": step, "return": ret}
            rows.append(row)
            log.info("step %d episode %d eval return %.3f rates %s", step, episode, ret, rates)
            if on_eval is not None and on_eval(step, row):
                break
    return rows


# ---------------------------------------------------------------- checkpoints
def save_agent_checkpoint(path, agent: Agent, run: RunConfig, state_dim: int, step: int,
                          vae: VAE | None) -> None:
    tensors = {f"agent.{k}": v for k, v in agent.state_dict().items()}
    meta = {"kind": "agent", "algo": run.algo, "task": run.task, "state_dim": state_dim, "step": step,
            "run": {k: v for k, v in run.flat().items()}}
    if vae is not None:
        tensors.update({f"vae.{k}": v for k, v in vae.state_dict().items()})
        meta["vae"] = {"latent_dim": vae.latent_dim, "channels": list(vae.channels)}
    save_file(path, tensors, meta)


def load_agent_checkpoint(path):
    """Returns ``(agent, run_config, vae_or_None, metadata)``."""
    tensors, meta = load_file(path)
    if meta.get("kind") != "agent":
        raise ValueError(f"{path} is not an agent checkpoint")
    run = run_config_from_dict(meta["run"])
    vae = None
    if "vae" in meta:
        vae = VAE(meta["vae"]["latent_dim"], meta["vae"]["channels"])
        vae.load_state_dict({k[4:]: v for k, v in tensors.items() if k.startswith("vae.")})
    agent = build_agent(run, meta["state_dim"], np.random.default_rng(0))
    try:
        agent.load_state_dict({k[6:]: v for k, v in tensors.items() if k.startswith("agent.")})
    except (KeyError, ValueError) as exc:
        raise ValueError(f"checkpoint {path} does not match the {run.algo} architecture: {exc}") from exc
    return agent, run, vae, meta


# --------------------------------------------------------------------- tasks
def build_agent(run: RunConfig, state_dim: int, rng) -> Agent:
    if run.task == "pointmass":
        kw = {"action_dim": 1} if run.algo != "ddqn" else {}
        if run.algo == "td3":
            tc = run.train
            kw["noise"] = NoiseSchedule((tc.noise_delta_accel,), tc.noise_decay_steps, tc.noise_path_length, (1.0,))
        if run.algo == "ddqn":
            raise ValueError("the point-mass task has a continuous action; use td3 or sac")
        return make_agent(run.algo, state_dim, run.train, rng=rng, **kw)
    return make_agent(run.algo, state_dim, run.train, rng=rng)


def make_env(run: RunConfig, vae: VAE | None):
    if run.task == "pointmass":
        return PointMass()
    return LatentDrivingEnv(run.scenario, vae, discrete=run.algo == "ddqn")


def evaluate_pointmass(agent: Agent, n_episodes: int, seed: int) -> float:
    env = PointMass()
    total = 0.0
    for s in episode_seeds(seed, n_episodes):
        obs, done = env.reset(s), False
        while not done:
            obs, r, done, _ = frame_skip_step(env, agent.act(obs, explore=False), 1)
            total += r
    return total / n_episodes


def _load_encoder(run: RunConfig) -> VAE | None:
    if run.task != "drive":
        return None
    if not run.vae_checkpoint:
        raise ValueError("the driving task needs vae_checkpoint (train one with train-vae)")
    path = Path(run.vae_checkpoint)
    if not path.is_file():
        raise FileNotFoundError(f"VAE checkpoint not found: {path}")
    vae, _ = load_vae(path)
    return vae


def train(run: RunConfig) -> TrainResult:
    """Train one agent, writing metrics.csv and checkpoint.ndgr into ``run.out_dir``."""
    out = Path(run.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    vae = _load_encoder(run)
    bank = SeedBank(run.seed)
    env = make_env(run, vae)
    frame_skip = run.scenario.frame_skip if run.task == "drive" else 1
    state_dim = vae.latent_dim if vae is not None else PointMass.state_dim
    agent = build_agent(run, state_dim, bank.stream("agent"))
    (out / "config.cfg").write_text(dump_run_config(run))
    ckpt, metrics = out / CHECKPOINT_NAME, out / METRICS_NAME
    save_agent_checkpoint(ckpt, agent, run, state_dim, 0, vae)

    if run.task == "drive":
        eval_env = LatentDrivingEnv(run.scenario, vae, discrete=run.algo == "ddqn")

        def evaluate_fn(step):
            rep = evaluate_agent(agent, eval_env, run.eval_episodes, run.seed)
            return rep.average_return, rep.rate_list()
    else:
        def evaluate_fn(step):
            return evaluate_pointmass(agent, run.eval_episodes, run.seed), None

    def on_eval(step, row):
        save_agent_checkpoint(ckpt, agent, run, state_dim, step, vae)

    with MetricsLogger(metrics) as logger:
        rows = run_loop(agent, env, run.train, run.total_steps, frame_skip, bank, evaluate_fn,
                        run.eval_every, logger, on_eval, action_dim=1 if run.task == "pointmass" else 2)
    if run.total_steps % run.eval_every:
        save_agent_checkpoint(ckpt, agent, run, state_dim, run.total_steps, vae)
    return TrainResult(ckpt, metrics, rows)


def evaluate(checkpoint, n_episodes: int, seed: int) -> EvalReport | float:
    """Evaluate a saved agent; driving checkpoints give an EvalReport,
    point-mass ones the mean return."""
    agent, run, vae, _ = load_agent_checkpoint(checkpoint)
    if run.task == "pointmass":
        return evaluate_pointmass(agent, n_episodes, seed)
    env = LatentDrivingEnv(run.scenario, vae, discrete=run.algo == "ddqn")
    return evaluate_agent(agent, env, n_episodes, seed)
