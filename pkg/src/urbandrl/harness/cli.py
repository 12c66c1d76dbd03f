"""Command-line entry point: ``urbandrl <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .. import birdview as bv
from ..drivesim import PurePursuit, ScenarioConfig, TrajectoryWriter, load_scenario
from ..latent import collect_dataset, save_vae, train_vae
from .config import RunConfig, load_run_config
from .evaluate import EvalReport
from .train import evaluate, train


def _scenario(path) -> ScenarioConfig:
    return load_scenario(path) if path else ScenarioConfig()


def cmd_collect_dataset(args) -> int:
    frames = collect_dataset(_scenario(args.scenario), args.frames, seed=args.seed, out=args.out)
    print(f"wrote {len(frames)} frames to {args.out}")
    return 0


def cmd_train_vae(args) -> int:
    frames = bv.read_dataset(args.data)

    def report(stats):
        print(f"epoch {stats.epoch:3d}  loss {stats.loss:10.3f}  mse {stats.mse:.5f}  kl {stats.kl:.3f}",
              flush=True)

    vae, history = train_vae(frames, args.epochs, lr=args.lr, batch_size=args.batch_size, seed=args.seed,
                             on_epoch=report)
    save_vae(args.out, vae)
    if args.plot:
        from .plots import plot_vae_history
        plot_vae_history(history, args.plot)
    print(f"saved VAE to {args.out}")
    return 0


def cmd_train(args) -> int:
    run = load_run_config(args.config) if args.config else RunConfig()
    over = {}
    if args.algo:
        over["algo"] = args.algo
    if args.seed is not None:
        over["seed"] = args.seed
        over["scenario"] = replace(run.scenario, seed=args.seed)
    if args.out:
        over["out_dir"] = args.out
    if args.steps is not None:
        over["total_steps"] = args.steps
    if args.vae:
        over["vae_checkpoint"] = args.vae
    run = replace(run, **over)
    result = train(run)
    last = result.rows[-1] if result.rows else None
    print(f"checkpoint {result.checkpoint}\nmetrics {result.metrics}")
    if last:
        print(f"final eval return {last['return']:.3f} at step {last['step']}")
    return 0


def cmd_eval(args) -> int:
    rep = evaluate(args.checkpoint, args.episodes, args.seed)
    if isinstance(rep, EvalReport):
        out = {"average_return": rep.average_return, "episodes": rep.episodes, **rep.rates}
    else:
        out = {"average_return": rep, "episodes": args.episodes}
    print(json.dumps(out, indent=2))
    return 0


def cmd_render(args) -> int:
    cfg = _scenario(args.scenario)
    env = bv.BirdViewEnv(cfg)
    env.reset(args.seed if args.seed is not None else cfg.seed)
    pilot = PurePursuit(env.world.route)
    dump = Path(args.dump) if args.dump else None
    if dump:
        dump.mkdir(parents=True, exist_ok=True)
    writer = TrajectoryWriter(dump / "trajectory.csv") if dump else None

    def snapshot(i: int):
        if dump:
            bv.write_ppm(dump / f"frame_{i:05d}.ppm", env.observe())

    snapshot(0)
    for i in range(1, args.steps + 1):
        if env.done:
            break
        for _ in range(cfg.frame_skip):
            action = pilot(env.world.ego)
            reward, done = env.step_frame(action)
            if writer:
                writer.write(env.world, env.last_reward)
            if done:
                break
        snapshot(i)
    if writer:
        writer.close()
    image = bv.render_full(env.world.road, env.history) if args.full else env.observe()
    bv.write_ppm(args.out, image)
    print(f"wrote {args.out}" + (f" and frames in {dump}" if dump else ""))
    return 0


def cmd_plot(args) -> int:
    from .plots import plot_returns, plot_success
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = [Path(p) for p in args.metrics]
    for p in paths:
        if not p.is_file():
            raise FileNotFoundError(p)
    r = plot_returns(paths, out / "returns.png", args.smoothing)
    s = plot_success(paths, out / "success.png")
    print(f"wrote {r} and {s}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="urbandrl", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log training progress")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("collect-dataset", help="record bird-view frames from a noisy route follower")
    c.add_argument("--frames", type=int, required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--scenario", help="scenario key=value file")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_collect_dataset)

    c = sub.add_parser("train-vae", help="fit the VAE encoder on a frame dataset")
    c.add_argument("--data", required=True)
    c.add_argument("--epochs", type=int, required=True)
    c.add_argument("--lr", type=float, default=1e-4)
    c.add_argument("--batch-size", type=int, default=64)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.add_argument("--plot", help="optional PNG of the loss curves")
    c.set_defaults(fn=cmd_train_vae)

    c = sub.add_parser("train", help="train a DDQN / TD3 / SAC agent")
    c.add_argument("--algo", choices=("ddqn", "td3", "sac"))
    c.add_argument("--config", help="run key=value file")
    c.add_argument("--seed", type=int)
    c.add_argument("--out", help="output directory")
    c.add_argument("--steps", type=int, help="override total_steps")
    c.add_argument("--vae", help="override vae_checkpoint")
    c.set_defaults(fn=cmd_train)

    c = sub.add_parser("eval", help="evaluate a saved agent without exploration")
    c.add_argument("--checkpoint", required=True)
    c.add_argument("--episodes", type=int, default=50)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_eval)

    c = sub.add_parser("render", help="write a bird-view PPM of a scenario")
    c.add_argument("--scenario", help="scenario key=value file")
    c.add_argument("--out", required=True)
    c.add_argument("--seed", type=int)
    c.add_argument("--steps", type=int, default=0, help="drive this many control steps first")
    c.add_argument("--full", action="store_true", help="256 px image instead of the 64 px observation")
    c.add_argument("--dump", help="directory for per-step PPM frames and a trajectory CSV")
    c.set_defaults(fn=cmd_render)

    c = sub.add_parser("plot", help="learning-curve and success-rate PNGs from metrics CSVs")
    c.add_argument("metrics", nargs="+")
    c.add_argument("--out", required=True, help="output directory")
    c.add_argument("--smoothing", type=float, default=0.9)
    c.set_defaults(fn=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
