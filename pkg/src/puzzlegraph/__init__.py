"""Graph-based multi-agent RL environments for six size-scalable logic puzzles."""

from ._kernels import KERNELS_COMPILED
from .core import (
    ALL_KINDS, GridSpec, ParseError, PuzzleInstance, PuzzleKind,
    canonical_sequence, parse_instance, read_corpus, serialize_instance,
    state_digest, write_corpus,
)
from .rules import PuzzleState, apply_actions, is_solved, violations
from .solvegen import (
    GenerationError, SolveResult, count_distinct, generate, solve,
    training_size,
)

__all__ = [
    "ALL_KINDS", "GridSpec", "ParseError", "PuzzleInstance", "PuzzleKind",
    "PuzzleState", "SolveResult", "GenerationError", "KERNELS_COMPILED",
    "apply_actions", "canonical_sequence", "count_distinct", "generate",
    "is_solved", "parse_instance", "read_corpus", "serialize_instance",
    "solve", "state_digest", "training_size", "violations", "write_corpus",
]

__version__ = "0.1.0"
