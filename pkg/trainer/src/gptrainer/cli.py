"""Trainer CLI: train | extrapolate."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ProcessorConfig, TrainConfig
from .extrapolate import build_corpora, run_checkpoint, write_csv
from .ppo import PPOTrainer


def cmd_train(args) -> int:
    if args.config:
        cfg = TrainConfig.from_file(args.config)
    else:
        cfg = TrainConfig(
            kind=args.kind, reward_mode=args.reward_mode,
            recurrent=not args.stateless,
            processor=ProcessorConfig(arch=args.arch),
            model_seed=args.model_seed, out_dir=args.out)
        if args.arch == "transformer":
            cfg.ppo.learning_rate = 6e-5
            cfg.ppo.batch_size = 3200
        if args.timesteps:
            cfg.ppo.total_timesteps = args.timesteps
    Path(cfg.out_dir).mkdir(parents=True, exist_ok=True)
    (Path(cfg.out_dir) / "config.json").write_text(cfg.to_json())
    trainer = PPOTrainer(cfg)
    summary = trainer.train(stop_at_solved=args.stop_at_solved)
    print(f"done: {summary}")
    return 0


def cmd_extrapolate(args) -> int:
    corpora = build_corpora(args.kind, Path(args.corpus_dir), count=args.count,
                            master_seed=args.master_seed)
    rows = []
    for seed_label, ckpt in enumerate(args.checkpoint):
        rows += run_checkpoint(Path(ckpt), args.kind, corpora,
                               count=args.count, seed_label=seed_label)
    write_csv(rows, Path(args.csv))
    for row in rows:
        print(f"{row[0]} {row[1]}x{row[1]} seed={row[2]} solved {row[3]}/{args.count}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gptrainer")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="PPO training against the env protocol")
    t.add_argument("--config", help="JSON config file (overrides other flags)")
    t.add_argument("--kind", default="net")
    t.add_argument("--arch", choices=("gcn", "transformer"), default="gcn")
    t.add_argument("--reward-mode", default="iterative",
                   choices=("sparse", "iterative", "partial"))
    t.add_argument("--stateless", action="store_true",
                   help="state-less agent (default: recurrent)")
    t.add_argument("--model-seed", type=int, default=0)
    t.add_argument("--timesteps", type=int, default=None)
    t.add_argument("--stop-at-solved", type=float, default=None,
                   help="early-stop once the rolling solved rate reaches this")
    t.add_argument("--out", default="runs/latest")
    t.set_defaults(fn=cmd_train)

    e = sub.add_parser("extrapolate", help="evaluate checkpoints on all sizes")
    e.add_argument("--checkpoint", nargs="+", required=True)
    e.add_argument("--kind", default="net")
    e.add_argument("--count", type=int, default=50)
    e.add_argument("--master-seed", type=int, default=7)
    e.add_argument("--corpus-dir", default="corpora")
    e.add_argument("--csv", default="extrapolation.csv")
    e.set_defaults(fn=cmd_extrapolate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
