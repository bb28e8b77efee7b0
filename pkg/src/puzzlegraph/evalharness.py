"""Extrapolation test suites and solved-count reporting.

Each kind gets six frozen corpora of 50 instances at the sizes
train/+1/+2/x4/x9/x16. Aggregates are reported as the interquartile mean
with a 95% stratified-bootstrap confidence interval.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .core import GridSpec, PuzzleInstance, PuzzleKind
from .env import (
    Environment, EnvConfig, do_nothing_policy, oracle_policy, random_policy,
)
from .rewards import RewardMode
from .solvegen import SUITE_LABELS, SUITE_SIZES, generate

SUITE_INSTANCES = 50


def build_suite(kind: PuzzleKind, master_seed: int,
                count: int = SUITE_INSTANCES,
                exclude_digests: frozenset[int] = frozenset()
                ) -> dict[str, list[PuzzleInstance]]:
    """Six deterministic corpora for the kind, keyed by size label.

    Instances colliding (by clue-layout digest) with `exclude_digests` are
    skipped and replaced, so a test set can be kept disjoint from a
    training corpus.
    """
    suite: dict[str, list[PuzzleInstance]] = {}
    for label, side in zip(SUITE_LABELS, SUITE_SIZES[kind]):
        size = GridSpec(side, side)
        instances: list[PuzzleInstance] = []
        seed = (master_seed << 8) + SUITE_LABELS.index(label)
        offset = 0
        while len(instances) < count:
            inst = generate(kind, size, seed + offset * 1_000_003)
            offset += 1
            if inst.digest() in exclude_digests:
                continue
            instances.append(inst)
        suite[label] = instances
    return suite


@dataclass
class EvalRow:
    kind: str
    size_label: str
    side: int
    agent_seed: int
    solved: int | None          # None marks a missing (aborted) entry
    total: int


@dataclass
class EvalReport:
    rows: list[EvalRow] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return all(r.solved is not None for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("kind,size,seed,solved\n")
        for r in self.rows:
            solved = "" if r.solved is None else str(r.solved)
            buf.write(f"{r.kind},{r.side}x{r.side},{r.agent_seed},{solved}\n")
        return buf.getvalue()

    def summary(self) -> str:
        lines = []
        for r in self.rows:
            mark = "MISSING" if r.solved is None else f"{r.solved}/{r.total}"
            lines.append(f"{r.kind:8s} {r.size_label:>5s} ({r.side}x{r.side}) "
                         f"seed={r.agent_seed}  solved {mark}")
        scores = [100.0 * r.solved / r.total for r in self.rows if r.solved is not None]
        strata = [r.kind for r in self.rows if r.solved is not None]
        if len(scores) >= 4:
            point, lo, hi = iqm_ci(scores, strata=strata)
            lines.append(f"IQM solved-%: {point:.2f}  (95% CI [{lo:.2f}, {hi:.2f}])")
        return "\n".join(lines)


class OracleAgent:
    """White-box test agent: writes the solution value everywhere."""

    name = "oracle"

    def act(self, observation, env: Environment) -> np.ndarray:
        return oracle_policy(env.state, env.instance)


class DoNothingAgent:
    name = "nothing"

    def act(self, observation, env: Environment) -> np.ndarray:
        return do_nothing_policy(observation)


class RandomAgent:
    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)

    def act(self, observation, env: Environment) -> np.ndarray:
        return random_policy(observation, self.rng)


def run_episode(env: Environment, agent, corpus_index: int) -> bool:
    obs = env.reset(corpus_index=corpus_index)
    if env.state.solved:  # pre-solved instances cannot occur from generate()
        return True
    while True:
        actions = agent.act(obs, env)
        out = env.step(actions)
        obs = out.observation
        if out.done:
            return bool(out.info["solved"])


def evaluate(agent, kind: PuzzleKind, suite: dict[str, list[PuzzleInstance]],
             horizon: int | None = None, agent_seed: int = 0,
             reward_mode: RewardMode = RewardMode.ITERATIVE) -> EvalReport:
    """Run each suite instance once to completion and count solved episodes.

    An agent failure (e.g. a remote endpoint disconnecting) aborts the
    affected corpus; its row is recorded as missing instead of crashing.
    """
    report = EvalReport()
    for label, instances in suite.items():
        side = instances[0].width
        cfg = EnvConfig(kind=kind, width=side, height=instances[0].height,
                        reward_mode=reward_mode, horizon=horizon,
                        corpus=instances)
        env = Environment(cfg)
        solved = 0
        failed = False
        for i in range(len(instances)):
            try:
                solved += run_episode(env, agent, i)
            except (ConnectionError, BrokenPipeError, EOFError, OSError):
                failed = True
                break
        report.rows.append(EvalRow(kind=kind.value, size_label=label, side=side,
                                   agent_seed=agent_seed,
                                   solved=None if failed else solved,
                                   total=len(instances)))
    return report


def iqm(values) -> float:
    """Interquartile mean: drop floor(k/4) values at each end, average the rest."""
    arr = np.sort(np.asarray(values, dtype=np.float64))
    k = len(arr)
    if k < 4:
        raise ValueError("need at least 4 samples for an interquartile mean")
    drop = k // 4
    return float(arr[drop:k - drop].mean())


def iqm_ci(scores, replicates: int = 2000, seed: int = 0, strata=None
           ) -> tuple[float, float, float]:
    """IQM point estimate with a percentile bootstrap 95% CI.

    Resampling is stratified: each stratum (e.g. puzzle kind) is resampled
    with replacement independently, then the IQM is taken over the combined
    replicate. Deterministic given the bootstrap seed.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if len(scores) < 4:
        raise ValueError("need at least 4 samples")
    if strata is None:
        groups = [scores]
    else:
        strata = np.asarray(strata)
        groups = [scores[strata == s] for s in np.unique(strata)]
    point = iqm(scores)
    rng = np.random.default_rng(seed)
    stats = np.empty(replicates, dtype=np.float64)
    for r in range(replicates):
        sample = np.concatenate(
            [g[rng.integers(0, len(g), size=len(g))] for g in groups])
        stats[r] = iqm(sample)
    lo, hi = np.percentile(stats, [2.5, 97.5])
    return point, float(lo), float(hi)
