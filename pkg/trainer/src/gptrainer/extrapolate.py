"""Run trained checkpoints over the six extrapolation sizes.

Corpora are produced with the environment package's CLI (an external
interface), then each instance is played once to completion through the
protocol. Emits the same CSV schema as the environment's eval harness:
kind,size,seed,solved.
"""
from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import torch

from .client import SingleEnv
from .models import decision_distribution
from .obs import batch_observations
from .ppo import load_model

SUITE_SIDES = {
    "tents": (5, 6, 7, 10, 15, 20),
    "lightup": (6, 6, 7, 10, 15, 20),
    "mosaic": (4, 5, 6, 8, 12, 16),
    "loopy": (4, 5, 6, 8, 12, 16),
    "net": (4, 5, 6, 8, 12, 16),
    "unruly": (6, 8, 10, 12, 18, 24),
}
SUITE_LABELS = ("train", "+1", "+2", "x4", "x9", "x16")


def build_corpora(kind: str, out_dir: Path, count: int = 50,
                  master_seed: int = 7, sides=None) -> list[tuple[int, Path]]:
    """One corpus file per extrapolation size, via `puzzlegraph generate`."""
    out_dir.mkdir(parents=True, exist_ok=True)
    out = []
    for i, side in enumerate(sides or SUITE_SIDES[kind]):
        path = out_dir / f"{kind}-{side}x{side}-{i}.gpz"
        if not path.exists():
            subprocess.run(
                [sys.executable, "-m", "puzzlegraph.cli", "generate",
                 "--kind", kind, "--size", f"{side}x{side}",
                 "--count", str(count),
                 "--seed", str((master_seed << 8) + i),
                 "--out", str(path)],
                check=True, capture_output=True)
        out.append((side, path))
    return out


@torch.no_grad()
def run_checkpoint(checkpoint: Path, kind: str,
                   corpora: list[tuple[int, Path]], count: int = 50,
                   seed_label: int = 0,
                   horizon: int | None = None) -> list[tuple]:
    """Rows (kind, side, seed, solved) for one checkpoint over each corpus."""
    rows = []
    model = None
    recurrent = True
    for side, path in corpora:
        with SingleEnv(kind=kind, side=side, corpus=str(path),
                       horizon=horizon) as env:
            solved = 0
            for ep in range(count):
                obs = env.reset(corpus_index=ep)
                if model is None:
                    model, raw = load_model(
                        checkpoint, obs.node_features.shape[1],
                        obs.edge_features.shape[1], obs.action_count)
                    recurrent = raw["recurrent"]
                hidden = (torch.zeros(obs.num_nodes, model.hidden)
                          if recurrent else None)
                while True:
                    batch = batch_observations([obs])
                    logits, _, hidden = model(batch, hidden)
                    act = decision_distribution(logits, batch) \
                        .logits.argmax(dim=-1)[0]
                    obs, _, done, info = env.step(act.tolist())
                    if done:
                        solved += bool(info["solved"])
                        break
            rows.append((kind, side, seed_label, solved))
    return rows


def write_csv(rows: list[tuple], path: Path) -> None:
    lines = ["kind,size,seed,solved"]
    lines += [f"{k},{s}x{s},{seed},{solved}" for k, s, seed, solved in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
