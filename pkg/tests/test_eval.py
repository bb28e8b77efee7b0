"""Eval harness: suite construction, agent evaluation, IQM statistics."""
import pytest

from puzzlegraph.core import PuzzleKind
from puzzlegraph.evalharness import (
    DoNothingAgent, OracleAgent, RandomAgent, build_suite, evaluate, iqm,
    iqm_ci,
)
from puzzlegraph.solvegen import SUITE_LABELS, SUITE_SIZES


class TestSuiteConstruction:
    def test_size_progression_matches_table(self):
        assert SUITE_SIZES[PuzzleKind.TENTS] == (5, 6, 7, 10, 15, 20)
        assert SUITE_SIZES[PuzzleKind.UNRULY] == (6, 8, 10, 12, 18, 24)
        assert SUITE_SIZES[PuzzleKind.MOSAIC][4] == 12  # x9 set
        assert SUITE_SIZES[PuzzleKind.LIGHTUP][:2] == (6, 6)

    def test_deterministic_and_counted(self):
        a = build_suite(PuzzleKind.NET, master_seed=3, count=4)
        b = build_suite(PuzzleKind.NET, master_seed=3, count=4)
        assert list(a) == list(SUITE_LABELS)
        for label in a:
            assert len(a[label]) == 4
            assert all(x == y for x, y in zip(a[label], b[label]))

    def test_exclusion_keeps_sets_disjoint(self):
        base = build_suite(PuzzleKind.MOSAIC, master_seed=1, count=4)
        taken = frozenset(i.digest() for i in base["train"])
        rebuilt = build_suite(PuzzleKind.MOSAIC, master_seed=1, count=4,
                              exclude_digests=taken)
        fresh = {i.digest() for i in rebuilt["train"]}
        assert not (fresh & taken)


class TestEvaluate:
    def test_oracle_solves_everything(self):
        suite = build_suite(PuzzleKind.NET, master_seed=5, count=3)
        small = {k: suite[k] for k in ("train", "+1")}
        report = evaluate(OracleAgent(), PuzzleKind.NET, small)
        assert all(r.solved == r.total for r in report.rows)

    def test_do_nothing_solves_nothing(self):
        suite = build_suite(PuzzleKind.LOOPY, master_seed=5, count=3)
        small = {"train": suite["train"]}
        report = evaluate(DoNothingAgent(), PuzzleKind.LOOPY, small, horizon=2)
        assert report.rows[0].solved == 0

    def test_random_agent_runs(self):
        suite = build_suite(PuzzleKind.MOSAIC, master_seed=5, count=2)
        report = evaluate(RandomAgent(0), PuzzleKind.MOSAIC,
                          {"train": suite["train"]})
        assert report.rows[0].total == 2

    def test_csv_schema(self):
        suite = build_suite(PuzzleKind.NET, master_seed=5, count=2)
        report = evaluate(OracleAgent(), PuzzleKind.NET, {"train": suite["train"]})
        lines = report.to_csv().splitlines()
        assert lines[0] == "kind,size,seed,solved"
        assert lines[1] == "net,4x4,0,2"

    @pytest.mark.acceptance
    def test_random_agent_never_solves_x4_sizes(self):
        # overwhelming-probability property from the environment contract
        for kind in (PuzzleKind.LOOPY, PuzzleKind.UNRULY):
            suite = build_suite(kind, master_seed=9, count=50)
            report = evaluate(RandomAgent(3), kind, {"x4": suite["x4"]})
            assert report.rows[0].solved == 0

    def test_missing_entries_marked(self):
        class FlakyAgent:
            def act(self, obs, env):
                raise ConnectionError("gone")

        suite = build_suite(PuzzleKind.NET, master_seed=5, count=2)
        report = evaluate(FlakyAgent(), PuzzleKind.NET, {"train": suite["train"]})
        assert report.rows[0].solved is None
        assert not report.complete
        assert report.to_csv().splitlines()[1] == "net,4x4,0,"


class TestIQM:
    def test_middle_two_of_four(self):
        assert iqm([0, 0, 100, 100]) == 50.0

    def test_hand_computed_decade(self):
        # drop 2 from each end of 0,10,...,90; mean of 20..70
        values = list(range(0, 100, 10))
        expected = sum(range(20, 80, 10)) / 6
        assert expected == 45.0
        assert iqm(values) == expected

    def test_invariant_under_permutation(self, rng):
        values = rng.integers(0, 100, size=17)
        shuffled = rng.permutation(values)
        assert iqm(values) == iqm(shuffled)

    def test_bounded_by_extremes(self, rng):
        values = rng.integers(0, 100, size=9)
        assert values.min() <= iqm(values) <= values.max()

    def test_needs_four_samples(self):
        with pytest.raises(ValueError):
            iqm([1, 2, 3])


class TestIQMCI:
    def test_degenerate_on_constants(self):
        point, lo, hi = iqm_ci([80.0] * 8)
        assert point == lo == hi == 80.0

    def test_deterministic_given_seed(self):
        a = iqm_ci([0, 10, 50, 90, 100], seed=4)
        b = iqm_ci([0, 10, 50, 90, 100], seed=4)
        assert a == b

    def test_ci_brackets_point_on_fuzz(self, rng):
        hits = 0
        trials = 60
        for t in range(trials):
            scores = rng.uniform(0, 100, size=rng.integers(8, 24))
            strata = rng.integers(0, 3, size=len(scores))
            point, lo, hi = iqm_ci(scores, replicates=400, seed=t, strata=strata)
            assert lo <= hi
            hits += lo <= point <= hi
        assert hits >= 0.99 * trials

    def test_stratified_resampling_respects_groups(self):
        # one stratum constant at 0, the other at 100: every replicate IQM
        # stays at 50 because group sizes are preserved
        scores = [0.0] * 6 + [100.0] * 6
        strata = ["a"] * 6 + ["b"] * 6
        point, lo, hi = iqm_ci(scores, replicates=200, strata=strata)
        assert point == lo == hi == 50.0
