"""Episodic multi-agent environment: reset samples a unique-solution
instance, step applies one action per decision cell simultaneously.

Train mode generates fresh instances from the config's seed stream; eval
mode draws from a frozen corpus so results are exactly reproducible. The
default horizon is the decision-cell count.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    NUM_ACTIONS, GridSpec, PuzzleInstance, PuzzleKind, decision_count,
)
from .graphenc import GraphObservation, encode
from .rewards import RewardMode, RewardTracker, masked_quality, quality
from .rules import PuzzleState, apply_actions, net_periods
from .solvegen import generate

# action id writing each cell value, per kind (direct-write kinds)
_VALUE_TO_ACTION = {
    PuzzleKind.TENTS: np.array([2, 1, 0, 3], dtype=np.int64),   # empty,grass,tent,(tree)
    PuzzleKind.MOSAIC: np.array([2, 0, 1], dtype=np.int64),     # unmarked,marked,blank
    PuzzleKind.LOOPY: np.array([2, 1, 0], dtype=np.int64),      # undecided,no_line,line
    PuzzleKind.LIGHTUP: np.array([1, 0], dtype=np.int64),       # empty,bulb
    PuzzleKind.UNRULY: np.array([2, 0, 1], dtype=np.int64),     # empty,white,black
}


def oracle_policy(state: PuzzleState, instance: PuzzleInstance) -> np.ndarray:
    """Per cell, the action transitioning the current value to the solution
    value (DO NOTHING where they already agree). Solves in one step."""
    kind = instance.kind
    cur = state.values
    target = instance.solution
    nothing = NUM_ACTIONS[kind] - 1
    if kind is PuzzleKind.NET:
        periods = net_periods(instance)
        delta = (target - cur) % periods
        return np.where(delta == 0, nothing, delta - 1).astype(np.int64)
    actions = _VALUE_TO_ACTION[kind][target.astype(np.intp)]
    return np.where(cur == target, nothing, actions).astype(np.int64)


def random_policy(observation: GraphObservation, rng: np.random.Generator) -> np.ndarray:
    """Uniform over the kind's action table, one action per decision node."""
    return rng.integers(0, observation.action_count,
                        size=observation.num_decision).astype(np.int64)


def do_nothing_policy(observation: GraphObservation) -> np.ndarray:
    nothing = observation.action_count - 1
    return np.full(observation.num_decision, nothing, dtype=np.int64)


@dataclass
class EnvConfig:
    kind: PuzzleKind
    width: int
    height: int
    reward_mode: RewardMode = RewardMode.ITERATIVE
    horizon: int | None = None          # None -> decision-cell count
    seed: int = 0
    corpus: list[PuzzleInstance] | None = None  # eval mode when set
    normalize_rewards: bool = False

    def __post_init__(self):
        GridSpec(self.width, self.height).validate_for(self.kind)
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    @property
    def num_decision(self) -> int:
        return decision_count(self.kind, self.width, self.height)

    @property
    def effective_horizon(self) -> int:
        return self.horizon if self.horizon is not None else self.num_decision


@dataclass
class StepOutcome:
    observation: GraphObservation
    reward: float
    done: bool
    info: dict = field(default_factory=dict)


class Environment:
    """One episode at a time; single-writer."""

    def __init__(self, config: EnvConfig):
        self.config = config
        self._episode = 0
        self._state: PuzzleState | None = None
        self._tracker: RewardTracker | None = None
        self._steps = 0
        self._done = True
        self.instance: PuzzleInstance | None = None

    @property
    def num_decision(self) -> int:
        return self.config.num_decision

    @property
    def state(self) -> PuzzleState:
        if self._state is None:
            raise RuntimeError("environment not reset")
        return self._state

    def reset(self, episode_seed: int | None = None,
              corpus_index: int | None = None) -> GraphObservation:
        cfg = self.config
        if cfg.corpus is not None:
            idx = corpus_index if corpus_index is not None else self._episode % len(cfg.corpus)
            inst = cfg.corpus[idx]
            if (inst.kind, inst.width, inst.height) != (cfg.kind, cfg.width, cfg.height):
                raise ValueError(
                    f"corpus instance {idx} is {inst.kind.value} "
                    f"{inst.width}x{inst.height}, config wants "
                    f"{cfg.kind.value} {cfg.width}x{cfg.height}")
            self.instance = inst
        else:
            seed = episode_seed if episode_seed is not None else cfg.seed + self._episode
            self.instance = generate(cfg.kind, GridSpec(cfg.width, cfg.height), seed)
        self._episode += 1
        self._state = PuzzleState.initial(self.instance)
        q0 = quality(self._state.values, self.instance.solution)
        m0 = masked_quality(self._state.values, self.instance.solution,
                            self._state.flags().cell)
        self._tracker = RewardTracker.begin(cfg.reward_mode, q0, m0,
                                            solved_bonus=self.num_decision)
        self._steps = 0
        self._done = False
        return encode(self._state)

    def step(self, actions: np.ndarray) -> StepOutcome:
        if self._state is None:
            raise RuntimeError("step before reset")
        if self._done:
            raise RuntimeError("step after episode end; reset first")
        cfg = self.config
        self._state = apply_actions(self._state, np.asarray(actions))
        q = quality(self._state.values, self.instance.solution)
        mq = masked_quality(self._state.values, self.instance.solution,
                            self._state.flags().cell)
        solved = self._state.solved
        reward = self._tracker.step(q, mq, solved)
        if cfg.normalize_rewards:
            reward /= self.num_decision
        self._steps += 1
        self._done = solved or self._steps >= cfg.effective_horizon
        info = {"solved": solved, "quality": q, "masked_quality": mq,
                "step": self._steps}
        return StepOutcome(observation=encode(self._state), reward=reward,
                           done=self._done, info=info)

    def oracle_actions(self) -> np.ndarray:
        return oracle_policy(self.state, self.instance)


class VectorEnv:
    """k independent environments advanced in lockstep; observations batched
    as lists. Finished episodes are auto-reset on the next step batch."""

    def __init__(self, configs: list[EnvConfig]):
        self.envs = [Environment(c) for c in configs]

    def __len__(self) -> int:
        return len(self.envs)

    def reset_all(self, episode_seeds: list[int] | None = None) -> list[GraphObservation]:
        if episode_seeds is None:
            return [e.reset() for e in self.envs]
        return [e.reset(episode_seed=s) for e, s in zip(self.envs, episode_seeds)]

    def step_all(self, actions: list[np.ndarray]) -> list[StepOutcome]:
        outcomes = []
        for env, act in zip(self.envs, actions):
            out = env.step(act)
            outcomes.append(out)
        return outcomes
