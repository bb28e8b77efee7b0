"""Identifiers, geometry, canonical sequences, digests, serialization."""
import itertools

import numpy as np
import pytest

from puzzlegraph.core import (
    GridSpec, ParseError, PuzzleInstance, PuzzleKind, canonical_sequence,
    decision_count, meta_count, net_mask_period, net_rotate_mask,
    parse_instance, serialize_instance, state_digest,
)
from puzzlegraph.rules import PuzzleState
from puzzlegraph.solvegen import generate, training_size

from conftest import SMALL_SIZES


class TestGridSpec:
    def test_minimum_size(self):
        with pytest.raises(ValueError):
            GridSpec(1, 5)
        with pytest.raises(ValueError):
            GridSpec(5, 0)

    def test_unruly_needs_even_sides(self):
        GridSpec(6, 6).validate_for(PuzzleKind.UNRULY)
        with pytest.raises(ValueError):
            GridSpec(5, 5).validate_for(PuzzleKind.UNRULY)
        with pytest.raises(ValueError):
            GridSpec(6, 5).validate_for(PuzzleKind.UNRULY)

    def test_parse(self):
        assert GridSpec.parse("5x7") == GridSpec(5, 7)
        with pytest.raises(ValueError):
            GridSpec.parse("5by7")


class TestCounts:
    def test_loopy_closed_form(self):
        # 2wh + w + h grid-edges
        assert decision_count(PuzzleKind.LOOPY, 2, 2) == 12
        assert decision_count(PuzzleKind.LOOPY, 4, 4) == 40
        assert meta_count(PuzzleKind.LOOPY, 4, 4) == 16

    def test_cell_kinds(self):
        for kind in (PuzzleKind.NET, PuzzleKind.TENTS, PuzzleKind.MOSAIC):
            assert decision_count(kind, 5, 3) == 15
        assert meta_count(PuzzleKind.TENTS, 5, 3) == 8
        assert meta_count(PuzzleKind.NET, 5, 3) == 0

    def test_net_mask_helpers(self):
        assert net_rotate_mask(0b0011, 1) == 0b0110  # N,E -> E,S
        assert net_mask_period(0b1111) == 1
        assert net_mask_period(0b0101) == 2
        assert net_mask_period(0b0001) == 4


class TestCanonicalSequence:
    def test_uniform_state(self, kind):
        inst = generate(kind, SMALL_SIZES[kind], seed=0)
        seq = canonical_sequence(PuzzleState.initial(inst))
        assert len(seq) == inst.num_decision

    def test_single_cell_difference(self, small_instance):
        state = PuzzleState.solved_state(small_instance)
        other = PuzzleState(small_instance, state.values.copy())
        # flip one non-fixed decision cell to a different in-range value
        from puzzlegraph.rules import fixed_mask
        free = np.flatnonzero(~fixed_mask(small_instance))
        i = int(free[0])
        other.values[i] = (other.values[i] + 1) % 2 if small_instance.kind is PuzzleKind.LIGHTUP \
            else (other.values[i] + 1) % 3
        a, b = canonical_sequence(state), canonical_sequence(other)
        assert (a != b).sum() == 1

    def test_injective_on_exhaustive_unruly(self):
        # all 3^4 boards of a 2x2 Unruly map to distinct sequences/digests
        inst = generate(PuzzleKind.UNRULY, GridSpec(2, 2), seed=1)
        digests = set()
        seqs = set()
        for combo in itertools.product(range(3), repeat=4):
            st = PuzzleState(inst, np.array(combo, dtype=np.int8))
            digests.add(state_digest(st))
            seqs.add(tuple(canonical_sequence(st)))
        assert len(digests) == 3 ** 4
        assert len(seqs) == 3 ** 4

    def test_digest_deterministic(self, small_instance):
        st = PuzzleState.initial(small_instance)
        assert state_digest(st) == state_digest(st)


class TestSerialization:
    def test_round_trip_random_instances(self, kind):
        size = SMALL_SIZES[kind]
        for seed in range(200):
            inst = generate(kind, size, seed)
            assert parse_instance(serialize_instance(inst)) == inst

    def test_round_trip_training_size(self, training_instance):
        rec = serialize_instance(training_instance)
        assert parse_instance(rec) == training_instance

    def test_truncated_record(self, small_instance):
        rec = serialize_instance(small_instance)
        with pytest.raises(ParseError):
            parse_instance(rec[: len(rec) // 2])

    def test_unknown_kind(self):
        with pytest.raises(ParseError) as err:
            parse_instance("gpi1 kind=sudoku w=4 h=4 seed=0 solution=0000")
        assert "unknown puzzle kind" in str(err.value)
        assert err.value.field == "kind"

    def test_error_carries_offset(self):
        rec = "gpi1 kind=net w=4 h=4 seed=x tiles=" + "1" * 16 + " source=0,0 solution=" + "0" * 16
        with pytest.raises(ParseError) as err:
            parse_instance(rec)
        assert err.value.field == "seed"
        assert err.value.offset == rec.index("seed=")

    def test_missing_magic(self):
        with pytest.raises(ParseError):
            parse_instance("kind=net w=4 h=4 seed=0")

    def test_solution_length_checked(self):
        with pytest.raises(ParseError) as err:
            parse_instance("gpi1 kind=unruly w=2 h=2 seed=0 givens=.... solution=111")
        assert err.value.field == "solution"


class TestInstanceDigest:
    def test_layout_digest_ignores_seed(self, kind):
        a = generate(kind, SMALL_SIZES[kind], seed=3)
        b = PuzzleInstance(kind=a.kind, width=a.width, height=a.height,
                           seed=a.seed + 999, solution=a.solution,
                           trees=a.trees, row_clues=a.row_clues,
                           col_clues=a.col_clues, black=a.black, clues=a.clues,
                           tiles=a.tiles, source=a.source, givens=a.givens)
        assert a.digest() == b.digest()
        assert a != b  # seed is still part of instance equality
