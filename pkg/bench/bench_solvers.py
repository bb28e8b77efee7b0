"""Benchmark the compiled solver kernels against the pure-Python lane.

Usage: python bench/bench_solvers.py [--seconds 2.0]
"""
import argparse
import os
import subprocess
import sys

from puzzlegraph.core import PuzzleKind


def time_solves(lane_env: dict, kind: PuzzleKind, seconds: float) -> float:
    """Solves per second for a lane, measured in a subprocess so the kernel
    lane selection (import-time) is honest."""
    code = f"""
import time
import numpy as np
from puzzlegraph.core import GridSpec, PuzzleKind
from puzzlegraph.solvegen import generate, solve, training_size
kind = PuzzleKind("{kind.value}")
size = training_size(kind)
instances = [generate(kind, size, s) for s in range(20)]
t0 = time.perf_counter()
count = 0
while time.perf_counter() - t0 < {seconds}:
    solve(instances[count % len(instances)], cap=2)
    count += 1
print(count / (time.perf_counter() - t0))
"""
    env = dict(os.environ)
    env.update(lane_env)
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, check=True, env=env)
    return float(out.stdout.strip())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seconds", type=float, default=2.0,
                        help="measurement window per (kind, lane)")
    args = parser.parse_args()

    print(f"{'kind':10s} {'compiled/s':>12s} {'pure/s':>12s} {'speedup':>9s}")
    for kind in PuzzleKind:
        fast = time_solves({}, kind, args.seconds)
        slow = time_solves({"PUZZLEGRAPH_PURE": "1"}, kind, args.seconds)
        print(f"{kind.value:10s} {fast:12.1f} {slow:12.1f} {fast / slow:8.1f}x")


if __name__ == "__main__":
    main()
