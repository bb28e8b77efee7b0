import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from puzzlegraph.core import ALL_KINDS, GridSpec, PuzzleKind
from puzzlegraph.solvegen import generate, training_size

# small sizes used for fast per-kind sweeps (valid for every kind)
SMALL_SIZES = {
    PuzzleKind.TENTS: GridSpec(4, 4),
    PuzzleKind.LIGHTUP: GridSpec(4, 4),
    PuzzleKind.MOSAIC: GridSpec(3, 3),
    PuzzleKind.LOOPY: GridSpec(3, 3),
    PuzzleKind.NET: GridSpec(3, 3),
    PuzzleKind.UNRULY: GridSpec(4, 4),
}


@pytest.fixture(params=ALL_KINDS, ids=lambda k: k.value)
def kind(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def training_instance(kind):
    return generate(kind, training_size(kind), seed=11)


@pytest.fixture
def small_instance(kind):
    return generate(kind, SMALL_SIZES[kind], seed=5)
