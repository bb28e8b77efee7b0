"""The three reward schemes over state quality and violation-masked quality.

Quality counts decision cells matching the unique solution; masked quality
counts only the violation-free ones. Iterative/partial rewards pay the
positive increment of the episode's running-max (masked) quality; sparse
pays a single bonus on solving.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class RewardMode(Enum):
    SPARSE = "sparse"
    ITERATIVE = "iterative"
    PARTIAL = "partial"

    @classmethod
    def from_name(cls, name: str) -> "RewardMode":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown reward mode: {name!r}") from None


def quality(sequence: np.ndarray, solution: np.ndarray) -> int:
    """Number of decision cells matching the solution."""
    sequence = np.asarray(sequence)
    solution = np.asarray(solution)
    if sequence.shape != solution.shape:
        raise ValueError(
            f"sequence length {sequence.shape} != solution length {solution.shape}")
    return int((sequence == solution).sum())


def masked_quality(sequence: np.ndarray, solution: np.ndarray,
                   cell_violations: np.ndarray) -> int:
    """Quality counting only cells that are not part of a violation."""
    sequence = np.asarray(sequence)
    solution = np.asarray(solution)
    cell_violations = np.asarray(cell_violations)
    if sequence.shape != solution.shape or sequence.shape != cell_violations.shape:
        raise ValueError("sequence, solution and violation flags must align")
    return int(((sequence == solution) & ~cell_violations).sum())


@dataclass
class RewardTracker:
    """Per-episode running-max quality bookkeeping.

    best_quality starts at the initial state's quality so the agent is not
    paid for pre-filled givens. The solved bonus defaults to the decision
    cell count, keeping sparse returns comparable to iterative ones.
    """

    mode: RewardMode
    solved_bonus: float
    best_quality: int
    best_masked: int

    @classmethod
    def begin(cls, mode: RewardMode, initial_quality: int,
              initial_masked: int, solved_bonus: float) -> "RewardTracker":
        return cls(mode=mode, solved_bonus=solved_bonus,
                   best_quality=initial_quality, best_masked=initial_masked)

    def step(self, q: int, masked_q: int, solved: bool) -> float:
        """Reward for reaching a state with the given qualities."""
        if self.mode is RewardMode.SPARSE:
            reward = self.solved_bonus if solved else 0.0
        elif self.mode is RewardMode.ITERATIVE:
            reward = float(max(0, q - self.best_quality))
        else:
            reward = float(max(0, masked_q - self.best_masked))
        self.best_quality = max(self.best_quality, q)
        self.best_masked = max(self.best_masked, masked_q)
        return reward
