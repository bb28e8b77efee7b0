"""Compiled and pure-Python kernel lanes agree exactly."""
import numpy as np
import pytest

from puzzlegraph import _kernels
from puzzlegraph.core import PuzzleKind
from puzzlegraph.solvegen import generate, loopy_topology, _clue_bounds, _PERIOD

from conftest import SMALL_SIZES

pure = _kernels.load_pure_lane()
compiled = _kernels.load_compiled_lane()


@pytest.fixture(scope="module")
def instance_batch():
    return {kind: [generate(kind, SMALL_SIZES[kind], seed) for seed in range(10)]
            for kind in PuzzleKind}


def test_lanes_are_distinct():
    if not compiled.COMPILED:
        pytest.skip("extension not built; lanes are identical")
    assert not pure.COMPILED


def run_lane(lane, inst, cap=4):
    """Minimal per-kind dispatch mirroring solvegen's buffer setup."""
    w, h = inst.width, inst.height
    n = w * h
    k = inst.kind
    big = 2 ** 62
    if k is PuzzleKind.NET:
        tiles = np.ascontiguousarray(inst.tiles.ravel())
        out = np.empty(cap * n, np.int8)
        sx, sy = inst.source
        return lane.solve_net(tiles, _PERIOD[tiles], sy * w + sx, w, h, cap, out,
                              np.empty(n, np.uint8), np.empty(n, np.int8),
                              np.empty(n, np.int32), np.empty(n, np.int8)), out
    if k is PuzzleKind.LOOPY:
        ne, nv, nf, ev_a, ev_b, ef_a, ef_b, vptr, vedg, fedg = loopy_topology(w, h)
        out = np.empty(cap * ne, np.int8)
        lo, hi = _clue_bounds(inst.clues.ravel(), 4)
        qcap = 16 * ne + 4 * nf + 4 * nv + 16
        return lane.solve_loopy(
            lo, hi, ne, nv, nf, cap, big, out, ev_a, ev_b, ef_a, ef_b,
            vptr, vedg, fedg,
            np.empty(ne, np.int8), np.empty(nv, np.int8), np.empty(nv, np.int8),
            np.empty(nf, np.int8), np.empty(nf, np.int8),
            np.empty(nv, np.int32), np.empty(nv, np.int32),
            np.empty(2 * nv + 4, np.int32), np.empty(ne, np.int32),
            np.empty(qcap, np.int32)), out
    if k is PuzzleKind.MOSAIC:
        out = np.empty(cap * n, np.int8)
        lo, hi = _clue_bounds(inst.clues.ravel(), 9)
        return lane.solve_mosaic(
            lo, hi, w, h, cap, big, out,
            np.empty(n, np.int8), np.empty(n, np.int8), np.empty(n, np.int8),
            np.empty(n, np.int32), np.empty(90 * n + 16, np.int32)), out
    if k is PuzzleKind.TENTS:
        out = np.empty(cap * n, np.int8)
        return lane.solve_tents(
            inst.trees.ravel().astype(np.int8),
            np.ascontiguousarray(inst.row_clues, np.int32),
            np.ascontiguousarray(inst.col_clues, np.int32), w, h, cap, big, out,
            np.empty(n, np.int8),
            np.empty(h, np.int32), np.empty(w, np.int32),
            np.empty(h, np.int32), np.empty(w, np.int32),
            np.empty(n, np.int8), np.empty(n, np.int8),
            np.empty(n, np.int32), np.empty(n * (w + h + 24) + 16, np.int32)), out
    if k is PuzzleKind.LIGHTUP:
        out = np.empty(cap * n, np.int8)
        return lane.solve_lightup(
            inst.black.ravel().astype(np.int8),
            np.ascontiguousarray(inst.clues.ravel()), w, h, cap, out,
            np.empty(n, np.int8), np.empty(n, np.int8), np.empty(n, np.int8),
            np.empty(n, np.int8), np.empty(n, np.int8),
            np.empty(n, np.int32), np.empty(n * (w + h + 24) + 16, np.int32)), out
    if k is PuzzleKind.UNRULY:
        out = np.empty(cap * n, np.int8)
        given = inst.givens.ravel().astype(np.int8).copy()
        given[given < 0] = 0
        first = np.full(n, 1, np.int8)
        return lane.solve_unruly(
            given, first, w, h, cap, big, out,
            np.empty(n, np.int8),
            np.empty(h, np.int32), np.empty(h, np.int32), np.empty(h, np.int32),
            np.empty(w, np.int32), np.empty(w, np.int32), np.empty(w, np.int32),
            np.empty(n, np.int32), np.empty(n * (w + h + 8) + 16, np.int32)), out
    raise AssertionError(k)


def test_solver_parity(kind, instance_batch):
    for inst in instance_batch[kind]:
        (nsol_c, nodes_c), out_c = run_lane(compiled, inst)
        (nsol_p, nodes_p), out_p = run_lane(pure, inst)
        assert nsol_c == nsol_p == 1
        assert nodes_c == nodes_p
        n = inst.num_decision
        assert np.array_equal(out_c[:n], out_p[:n])


def test_generation_parity():
    # the whole generation pipeline is lane-independent
    import subprocess
    import sys
    code = (
        "from puzzlegraph.core import serialize_instance, PuzzleKind\n"
        "from puzzlegraph.solvegen import generate, training_size\n"
        "for k in PuzzleKind:\n"
        "    print(serialize_instance(generate(k, training_size(k), 31)))\n"
    )
    fast = subprocess.run([sys.executable, "-c", code], capture_output=True,
                          text=True, check=True, env={"PATH": "/usr/bin"})
    slow = subprocess.run([sys.executable, "-c", code], capture_output=True,
                          text=True, check=True,
                          env={"PATH": "/usr/bin", "PUZZLEGRAPH_PURE": "1"})
    assert fast.stdout == slow.stdout
