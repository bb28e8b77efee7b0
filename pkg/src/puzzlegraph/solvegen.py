"""Exact solving (uniqueness oracle), instance generation, and config counting.

The solvers run in the kernel lane selected at import (compiled extension or
pure Python, see _kernels). Generation recipes:

  Net     - uniform spanning tree (Wilson's walk), tile shapes from the tree,
            orientations scrambled uniformly modulo tile symmetry, rejected
            when the scramble equals the solution.
  Loopy   - random simple cycle from a non-backtracking walk, clues on all
            faces, then greedy clue deletion while uniqueness holds.
  Mosaic  - random black/white fill, clues on all cells, greedy clue deletion
            under uniqueness.
  Tents   - random maximal non-adjacent tent placement, one tree attached per
            tent, row/column counts as clues, rejected when not unique.
  Lightup - random black mask, greedy bulb placement lighting everything,
            numbers derived on all black squares, rejected when not unique.
  Unruly  - randomized backtracking fill of a valid balanced grid, greedy
            given deletion using the forced-opposite uniqueness test.

Every generated instance is re-verified unique by a cap-2 solve before it is
returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import kernels
from .core import (
    GridSpec, LOOPY_LINE, LOOPY_NOLINE, PuzzleInstance, PuzzleKind,
    TENTS_GRASS, TENTS_TENT, TENTS_TREE, UNRULY_BLACK, UNRULY_WHITE,
    net_mask_period, net_rotate_mask,
)

RETRY_BUDGET = 1000
UNLIMITED_NODES = 2**62
# node budget for each clue-redundancy proof during greedy deletion; a test
# that exceeds it conservatively keeps the clue (uniqueness is monotone in
# clues, so this only trades minimality for bounded generation time)
DELETION_NODE_BUDGET = 20_000
# budget for the confirming cap-2 verify of deletion-generated instances
VERIFY_NODE_BUDGET = 2_000_000
# budget for the in-recipe uniqueness filter of rejection-based kinds
UNIQUENESS_NODE_BUDGET = 1_000_000

# Paper size table: training size and the six evaluation sizes per kind.
TRAINING_SIZES = {
    PuzzleKind.TENTS: 5, PuzzleKind.LIGHTUP: 6, PuzzleKind.MOSAIC: 4,
    PuzzleKind.LOOPY: 4, PuzzleKind.NET: 4, PuzzleKind.UNRULY: 6,
}
VALIDATION_SIZES = {
    PuzzleKind.TENTS: 6, PuzzleKind.LIGHTUP: 6, PuzzleKind.MOSAIC: 5,
    PuzzleKind.LOOPY: 5, PuzzleKind.NET: 5, PuzzleKind.UNRULY: 8,
}
SUITE_LABELS = ("train", "+1", "+2", "x4", "x9", "x16")
SUITE_SIZES = {
    PuzzleKind.TENTS: (5, 6, 7, 10, 15, 20),
    PuzzleKind.LIGHTUP: (6, 6, 7, 10, 15, 20),
    PuzzleKind.MOSAIC: (4, 5, 6, 8, 12, 16),
    PuzzleKind.LOOPY: (4, 5, 6, 8, 12, 16),
    PuzzleKind.NET: (4, 5, 6, 8, 12, 16),
    PuzzleKind.UNRULY: (6, 8, 10, 12, 18, 24),
}

_KIND_ID = {k: i for i, k in enumerate(PuzzleKind)}

_ROT = np.array([[net_rotate_mask(m, k) for k in range(4)] for m in range(16)],
                dtype=np.uint8)
_PERIOD = np.array([net_mask_period(m) for m in range(16)], dtype=np.int8)


class GenerationError(RuntimeError):
    pass


def training_size(kind: PuzzleKind) -> GridSpec:
    s = TRAINING_SIZES[kind]
    return GridSpec(s, s)


@dataclass
class SolveResult:
    """Outcome of a capped exact solve."""

    solutions: list[np.ndarray]
    nodes_expanded: int
    cap: int

    @property
    def verdict(self) -> str:
        if not self.solutions:
            return "none"
        return "unique" if len(self.solutions) == 1 else "multiple"


@lru_cache(maxsize=None)
def loopy_topology(w: int, h: int):
    """Static edge/vertex/face incidence arrays for the Loopy solver."""
    ne = 2 * w * h + w + h
    nv = (w + 1) * (h + 1)
    nf = w * h
    nh = w * (h + 1)
    ev_a = np.empty(ne, dtype=np.int32)
    ev_b = np.empty(ne, dtype=np.int32)
    ef_a = np.full(ne, -1, dtype=np.int32)
    ef_b = np.full(ne, -1, dtype=np.int32)
    for y in range(h + 1):
        for x in range(w):
            e = y * w + x
            ev_a[e] = y * (w + 1) + x
            ev_b[e] = y * (w + 1) + x + 1
            if y > 0:
                ef_a[e] = (y - 1) * w + x
            if y < h:
                ef_b[e] = y * w + x
    for y in range(h):
        for x in range(w + 1):
            e = nh + y * (w + 1) + x
            ev_a[e] = y * (w + 1) + x
            ev_b[e] = (y + 1) * (w + 1) + x
            if x > 0:
                ef_a[e] = y * w + x - 1
            if x < w:
                ef_b[e] = y * w + x
    counts = np.zeros(nv + 1, dtype=np.int32)
    for e in range(ne):
        counts[ev_a[e] + 1] += 1
        counts[ev_b[e] + 1] += 1
    vptr = np.cumsum(counts, dtype=np.int32)
    vedg = np.empty(vptr[-1], dtype=np.int32)
    fill = vptr[:-1].copy()
    for e in range(ne):
        for v in (ev_a[e], ev_b[e]):
            vedg[fill[v]] = e
            fill[v] += 1
    fedg = np.empty(nf * 4, dtype=np.int32)
    for y in range(h):
        for x in range(w):
            f = y * w + x
            fedg[f * 4 + 0] = y * w + x
            fedg[f * 4 + 1] = (y + 1) * w + x
            fedg[f * 4 + 2] = nh + y * (w + 1) + x
            fedg[f * 4 + 3] = nh + y * (w + 1) + x + 1
    return ne, nv, nf, ev_a, ev_b, ef_a, ef_b, vptr, vedg, fedg


def _clue_bounds(flat: np.ndarray, maxv: int):
    """Exact bounds for present clues, unconstrained for absent (-1) ones."""
    lo = np.where(flat < 0, 0, flat).astype(np.int8)
    hi = np.where(flat < 0, maxv, flat).astype(np.int8)
    return lo, hi


def _solve_loopy_raw(clo: np.ndarray, chi: np.ndarray, w: int, h: int, cap: int,
                     budget: int = UNLIMITED_NODES):
    ne, nv, nf, ev_a, ev_b, ef_a, ef_b, vptr, vedg, fedg = loopy_topology(w, h)
    out = np.empty(cap * ne, dtype=np.int8)
    qcap = 16 * ne + 4 * nf + 4 * nv + 16
    nsol, nodes = kernels.solve_loopy(
        clo, chi, ne, nv, nf, cap, budget, out, ev_a, ev_b, ef_a, ef_b,
        vptr, vedg, fedg,
        np.empty(ne, np.int8), np.empty(nv, np.int8), np.empty(nv, np.int8),
        np.empty(nf, np.int8), np.empty(nf, np.int8),
        np.empty(nv, np.int32), np.empty(nv, np.int32),
        np.empty(2 * nv + 4, np.int32), np.empty(ne, np.int32),
        np.empty(qcap, np.int32))
    return nsol, nodes, out


def _solve_mosaic_raw(clo: np.ndarray, chi: np.ndarray, w: int, h: int, cap: int,
                      budget: int = UNLIMITED_NODES):
    n = w * h
    out = np.empty(cap * n, dtype=np.int8)
    nsol, nodes = kernels.solve_mosaic(
        clo, chi, w, h, cap, budget, out,
        np.empty(n, np.int8), np.empty(n, np.int8), np.empty(n, np.int8),
        np.empty(n, np.int32), np.empty(90 * n + 16, np.int32))
    return nsol, nodes, out


def _solve_tents_raw(trees_flat, rowc, colc, w, h, cap,
                     budget: int = UNLIMITED_NODES):
    n = w * h
    out = np.empty(cap * n, dtype=np.int8)
    nsol, nodes = kernels.solve_tents(
        trees_flat, rowc, colc, w, h, cap, budget, out,
        np.empty(n, np.int8),
        np.empty(h, np.int32), np.empty(w, np.int32),
        np.empty(h, np.int32), np.empty(w, np.int32),
        np.empty(n, np.int8), np.empty(n, np.int8),
        np.empty(n, np.int32), np.empty(n * (w + h + 24) + 16, np.int32))
    return nsol, nodes, out


def _solve_lightup_raw(black_flat, clue_flat, w, h, cap):
    n = w * h
    out = np.empty(cap * n, dtype=np.int8)
    nsol, nodes = kernels.solve_lightup(
        black_flat, clue_flat, w, h, cap, out,
        np.empty(n, np.int8), np.empty(n, np.int8), np.empty(n, np.int8),
        np.empty(n, np.int8), np.empty(n, np.int8),
        np.empty(n, np.int32), np.empty(n * (w + h + 24) + 16, np.int32))
    return nsol, nodes, out


def _solve_unruly_raw(given_flat, first_flat, w, h, cap,
                      budget: int = UNLIMITED_NODES):
    n = w * h
    out = np.empty(cap * n, dtype=np.int8)
    nsol, nodes = kernels.solve_unruly(
        given_flat, first_flat, w, h, cap, budget, out,
        np.empty(n, np.int8),
        np.empty(h, np.int32), np.empty(h, np.int32), np.empty(h, np.int32),
        np.empty(w, np.int32), np.empty(w, np.int32), np.empty(w, np.int32),
        np.empty(n, np.int32), np.empty(n * (w + h + 8) + 16, np.int32))
    return nsol, nodes, out


def _solve_net_raw(tiles_flat, source_idx, w, h, cap):
    n = w * h
    out = np.empty(cap * n, dtype=np.int8)
    nsol, nodes = kernels.solve_net(
        tiles_flat, _PERIOD[tiles_flat], source_idx, w, h, cap, out,
        np.empty(n, np.uint8), np.empty(n, np.int8),
        np.empty(n, np.int32), np.empty(n, np.int8))
    if nsol < 0:
        raise ValueError("net tile set does not have the 2(n-1) connector "
                         "ends of a spanning tree; refusing to solve")
    return nsol, nodes, out


def solve(instance: PuzzleInstance, cap: int = 2) -> SolveResult:
    """Complete capped search for solutions of the instance's clue layout.

    Deterministic exploration: canonical cell order, values ascending. The
    stored solution is ignored; verdict "unique" means exactly one solution
    exists under the cap-2 search.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    k, w, h = instance.kind, instance.width, instance.height
    n = instance.num_decision
    if k is PuzzleKind.LOOPY:
        nsol, nodes, out = _solve_loopy_raw(
            *_clue_bounds(instance.clues.ravel(), 4), w, h, cap)
        n = out.size // cap
    elif k is PuzzleKind.MOSAIC:
        nsol, nodes, out = _solve_mosaic_raw(
            *_clue_bounds(instance.clues.ravel(), 9), w, h, cap)
    elif k is PuzzleKind.TENTS:
        nsol, nodes, out = _solve_tents_raw(
            instance.trees.ravel().astype(np.int8),
            np.ascontiguousarray(instance.row_clues, dtype=np.int32),
            np.ascontiguousarray(instance.col_clues, dtype=np.int32), w, h, cap)
    elif k is PuzzleKind.LIGHTUP:
        nsol, nodes, out = _solve_lightup_raw(
            instance.black.ravel().astype(np.int8),
            np.ascontiguousarray(instance.clues.ravel()), w, h, cap)
    elif k is PuzzleKind.UNRULY:
        given = instance.givens.ravel().astype(np.int8).copy()
        given[given < 0] = 0
        first = np.full(w * h, UNRULY_WHITE, dtype=np.int8)
        nsol, nodes, out = _solve_unruly_raw(given, first, w, h, cap)
    elif k is PuzzleKind.NET:
        sx, sy = instance.source
        nsol, nodes, out = _solve_net_raw(
            np.ascontiguousarray(instance.tiles.ravel()), sy * w + sx, w, h, cap)
    else:  # pragma: no cover
        raise AssertionError(k)
    sols = [out[i * n:(i + 1) * n].copy() for i in range(nsol)]
    return SolveResult(solutions=sols, nodes_expanded=int(nodes), cap=cap)


def _rng_for(kind: PuzzleKind, w: int, h: int, seed: int, attempt: int):
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1),
                                spawn_key=(_KIND_ID[kind], w, h, attempt))
    return np.random.default_rng(ss)


@lru_cache(maxsize=None)
def _grid_neighbors(w: int, h: int):
    nbrs = []
    for i in range(w * h):
        y, x = divmod(i, w)
        cell = []
        if x > 0:
            cell.append(i - 1)
        if x + 1 < w:
            cell.append(i + 1)
        if y > 0:
            cell.append(i - w)
        if y + 1 < h:
            cell.append(i + w)
        nbrs.append(tuple(cell))
    return tuple(nbrs)


def _wilson_tree(rng, w: int, h: int, root: int) -> np.ndarray:
    """Uniform spanning tree of the grid graph; returns connector masks."""
    n = w * h
    nbrs = _grid_neighbors(w, h)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[root] = True
    masks = np.zeros(n, dtype=np.uint8)

    def link(a: int, b: int):
        d = b - a
        if d == 1:
            masks[a] |= 2   # E
            masks[b] |= 8   # W
        elif d == -1:
            masks[a] |= 8
            masks[b] |= 2
        elif d == w:
            masks[a] |= 4   # S
            masks[b] |= 1   # N
        else:
            masks[a] |= 1
            masks[b] |= 4

    for start in range(n):
        if in_tree[start]:
            continue
        path = [start]
        pos = {start: 0}
        cur = start
        while not in_tree[cur]:
            step = nbrs[cur][rng.integers(len(nbrs[cur]))]
            if step in pos:
                k = pos[step]
                for c in path[k + 1:]:
                    del pos[c]
                del path[k + 1:]
            else:
                pos[step] = len(path)
                path.append(step)
            cur = step
        for a, b in zip(path, path[1:]):
            link(a, b)
            in_tree[a] = True
        in_tree[path[-1]] = True
    return masks


def _gen_net(rng, w: int, h: int, seed: int) -> PuzzleInstance | None:
    n = w * h
    sx, sy = w // 2, h // 2
    source = sy * w + sx
    masks = _wilson_tree(rng, w, h, source)
    periods = _PERIOD[masks]
    r = (rng.integers(0, 4, size=n) % periods).astype(np.int8)
    sol = ((periods - r) % periods).astype(np.int8)
    if not sol.any():
        return None  # scramble equals solution
    presented = _ROT[masks, r]
    nsol, _, out = _solve_net_raw(presented, source, w, h, 2)
    if nsol != 1 or not np.array_equal(out[:n], sol):
        return None
    return PuzzleInstance(kind=PuzzleKind.NET, width=w, height=h, seed=seed,
                          solution=sol, tiles=presented.reshape(h, w),
                          source=(sx, sy))


def _gen_loopy(rng, w: int, h: int, seed: int) -> PuzzleInstance | None:
    nvx = w + 1
    # non-backtracking walk on grid vertices until the first revisit
    start = int(rng.integers(nvx * (h + 1)))
    path = [start]
    pos = {start: 0}
    prev = -1
    while True:
        cur = path[-1]
        y, x = divmod(cur, nvx)
        opts = []
        if x > 0 and cur - 1 != prev:
            opts.append(cur - 1)
        if x + 1 < nvx and cur + 1 != prev:
            opts.append(cur + 1)
        if y > 0 and cur - nvx != prev:
            opts.append(cur - nvx)
        if y + 1 < h + 1 and cur + nvx != prev:
            opts.append(cur + nvx)
        step = opts[rng.integers(len(opts))]
        if step in pos:
            cycle = path[pos[step]:]
            break
        pos[step] = len(path)
        path.append(step)
        prev = cur
    ne = 2 * w * h + w + h
    nh = w * (h + 1)
    sol = np.full(ne, LOOPY_NOLINE, dtype=np.int8)
    verts = cycle + [cycle[0]]
    for a, b in zip(verts, verts[1:]):
        if abs(b - a) == 1:
            y, x = divmod(min(a, b), nvx)
            sol[y * w + x] = LOOPY_LINE
        else:
            y, x = divmod(min(a, b), nvx)
            sol[nh + y * (w + 1) + x] = LOOPY_LINE
    hl = (sol[:nh] == LOOPY_LINE).reshape(h + 1, w)
    vl = (sol[nh:] == LOOPY_LINE).reshape(h, w + 1)
    clues = (hl[:h].astype(np.int8) + hl[1:] + vl[:, :w] + vl[:, 1:])
    flat = clues.ravel().copy()
    lo, hi = _clue_bounds(flat, 4)
    nsol, _, _ = _solve_loopy_raw(lo, hi, w, h, 2)
    if nsol != 1:
        return None
    for f in rng.permutation(w * h):
        # clue f is redundant iff no solution violates it while the others
        # hold: two budgeted existence solves (count < clue, count > clue);
        # a budget abort keeps the clue
        c = int(flat[f])
        lo[f], hi[f] = 0, c - 1
        ns_lo, nodes_lo, _ = _solve_loopy_raw(lo, hi, w, h, 1, DELETION_NODE_BUDGET)
        lo[f], hi[f] = c + 1, 4
        ns_hi, nodes_hi, _ = _solve_loopy_raw(lo, hi, w, h, 1, DELETION_NODE_BUDGET)
        if (ns_lo == 0 and nodes_lo < DELETION_NODE_BUDGET
                and ns_hi == 0 and nodes_hi < DELETION_NODE_BUDGET):
            flat[f] = -1
            lo[f], hi[f] = 0, 4
        else:
            lo[f], hi[f] = c, c
    return PuzzleInstance(kind=PuzzleKind.LOOPY, width=w, height=h, seed=seed,
                          solution=sol, clues=flat.reshape(h, w))


def _gen_mosaic(rng, w: int, h: int, seed: int) -> PuzzleInstance | None:
    n = w * h
    fill = rng.integers(1, 3, size=n).astype(np.int8)
    blacks = (fill == 1).reshape(h, w)
    p = np.zeros((h + 2, w + 2), dtype=np.int8)
    p[1:-1, 1:-1] = blacks
    counts = sum(p[dy:dy + h, dx:dx + w] for dy in range(3) for dx in range(3))
    flat = counts.astype(np.int8).ravel()
    lo, hi = _clue_bounds(flat, 9)
    nsol, _, _ = _solve_mosaic_raw(lo, hi, w, h, 2)
    if nsol != 1:
        return None
    for j in rng.permutation(n):
        c = int(flat[j])
        lo[j], hi[j] = 0, c - 1
        ns_lo, nodes_lo, _ = _solve_mosaic_raw(lo, hi, w, h, 1, DELETION_NODE_BUDGET)
        lo[j], hi[j] = c + 1, 9
        ns_hi, nodes_hi, _ = _solve_mosaic_raw(lo, hi, w, h, 1, DELETION_NODE_BUDGET)
        if (ns_lo == 0 and nodes_lo < DELETION_NODE_BUDGET
                and ns_hi == 0 and nodes_hi < DELETION_NODE_BUDGET):
            flat[j] = -1
            lo[j], hi[j] = 0, 9
        else:
            lo[j], hi[j] = c, c
    return PuzzleInstance(kind=PuzzleKind.MOSAIC, width=w, height=h, seed=seed,
                          solution=fill, clues=flat.reshape(h, w))


def _gen_tents(rng, w: int, h: int, seed: int) -> PuzzleInstance | None:
    n = w * h
    tent = np.zeros((h, w), dtype=bool)
    tree = np.zeros((h, w), dtype=bool)
    for i in rng.permutation(n):
        y, x = divmod(int(i), w)
        y0, y1 = max(0, y - 1), min(h, y + 2)
        x0, x1 = max(0, x - 1), min(w, x + 2)
        if not tent[y0:y1, x0:x1].any():
            tent[y, x] = True
    tys, txs = np.nonzero(tent)
    order = rng.permutation(len(tys))
    for j in order:
        y, x = int(tys[j]), int(txs[j])
        cands = []
        for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
            if not (0 <= ny < h and 0 <= nx < w):
                continue
            if tent[ny, nx] or tree[ny, nx]:
                continue
            adj = 0
            for ty, tx in ((ny - 1, nx), (ny + 1, nx), (ny, nx - 1), (ny, nx + 1)):
                if 0 <= ty < h and 0 <= tx < w and tent[ty, tx]:
                    adj += 1
            if adj == 1:
                cands.append((ny, nx))
        if not cands:
            tent[y, x] = False  # tent with no attachable tree: drop it
        else:
            ny, nx = cands[rng.integers(len(cands))]
            tree[ny, nx] = True
    if not tent.any():
        return None
    sol = np.full(n, TENTS_GRASS, dtype=np.int8)
    sol[tent.ravel()] = TENTS_TENT
    sol[tree.ravel()] = TENTS_TREE
    rowc = tent.sum(axis=1).astype(np.int32)
    colc = tent.sum(axis=0).astype(np.int32)
    # budgeted: instances whose uniqueness proof is too expensive are
    # rejected rather than accepted unproven
    nsol, nodes, out = _solve_tents_raw(tree.ravel().astype(np.int8), rowc, colc,
                                        w, h, 2, UNIQUENESS_NODE_BUDGET)
    if nsol != 1 or nodes >= UNIQUENESS_NODE_BUDGET:
        return None
    if not np.array_equal(out[:n], sol):
        return None
    return PuzzleInstance(kind=PuzzleKind.TENTS, width=w, height=h, seed=seed,
                          solution=sol, trees=tree, row_clues=rowc, col_clues=colc)


def _gen_lightup(rng, w: int, h: int, seed: int,
                 black_density: float = 0.25) -> PuzzleInstance | None:
    n = w * h
    black = (rng.random((h, w)) < black_density)
    if black.all():
        return None
    bulbs = np.zeros((h, w), dtype=bool)
    lit = black.copy()  # treat black as "already lit" for the fill loop
    while not lit.all():
        unlit = np.flatnonzero(~lit)
        i = int(unlit[rng.integers(len(unlit))])
        y, x = divmod(i, w)
        bulbs[y, x] = True
        lit[y, x] = True
        for k in range(x - 1, -1, -1):
            if black[y, k]:
                break
            lit[y, k] = True
        for k in range(x + 1, w):
            if black[y, k]:
                break
            lit[y, k] = True
        for k in range(y - 1, -1, -1):
            if black[k, x]:
                break
            lit[k, x] = True
        for k in range(y + 1, h):
            if black[k, x]:
                break
            lit[k, x] = True
    p = np.zeros((h + 2, w + 2), dtype=np.int8)
    p[1:-1, 1:-1] = bulbs
    adj = p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:]
    clues = np.where(black, adj, -1).astype(np.int8)
    sol = bulbs.ravel().astype(np.int8)
    nsol, _, out = _solve_lightup_raw(black.ravel().astype(np.int8),
                                      np.ascontiguousarray(clues.ravel()), w, h, 2)
    if nsol != 1 or not np.array_equal(out[:n], sol):
        return None
    return PuzzleInstance(kind=PuzzleKind.LIGHTUP, width=w, height=h, seed=seed,
                          solution=sol, black=black, clues=clues)


# Randomized backtracking fills have a heavy-tailed runtime, so each try
# gets a small node budget and a fresh random value-order on restart.
FILL_NODE_BUDGET = 50_000
FILL_RESTARTS = 400


def _unruly_fill(rng, w: int, h: int) -> np.ndarray | None:
    """Random valid balanced grid: budgeted backtracking fill with restarts."""
    n = w * h
    empty = np.zeros(n, dtype=np.int8)
    for _ in range(FILL_RESTARTS):
        first = rng.integers(UNRULY_WHITE, UNRULY_BLACK + 1, size=n).astype(np.int8)
        nsol, nodes, out = _solve_unruly_raw(empty, first, w, h, 1, FILL_NODE_BUDGET)
        if nsol == 1:
            return out[:n].copy()
    return None


def _gen_unruly(rng, w: int, h: int, seed: int) -> PuzzleInstance | None:
    n = w * h
    full = _unruly_fill(rng, w, h)
    if full is None:
        return None
    givens = full.copy()
    ones = np.full(n, UNRULY_WHITE, dtype=np.int8)
    for i in rng.permutation(n):
        v = givens[i]
        givens[i] = 0
        forced = givens.copy()
        forced[i] = 3 - v  # any solution here disagrees with the original
        nsol, nodes, _ = _solve_unruly_raw(forced, ones, w, h, 1,
                                           DELETION_NODE_BUDGET)
        if nsol > 0 or nodes >= DELETION_NODE_BUDGET:
            givens[i] = v
    inst_givens = givens.astype(np.int8).copy()
    inst_givens[inst_givens == 0] = -1
    return PuzzleInstance(kind=PuzzleKind.UNRULY, width=w, height=h, seed=seed,
                          solution=full, givens=inst_givens.reshape(h, w))


_GENERATORS = {
    PuzzleKind.NET: _gen_net,
    PuzzleKind.LOOPY: _gen_loopy,
    PuzzleKind.MOSAIC: _gen_mosaic,
    PuzzleKind.TENTS: _gen_tents,
    PuzzleKind.LIGHTUP: _gen_lightup,
    PuzzleKind.UNRULY: _gen_unruly,
}


def _verify_unique(inst: PuzzleInstance, budget: int) -> SolveResult | None:
    """Cap-2 verification solve; None when aborted on the node budget."""
    k, w, h = inst.kind, inst.width, inst.height
    if k is PuzzleKind.LOOPY:
        nsol, nodes, out = _solve_loopy_raw(
            *_clue_bounds(inst.clues.ravel(), 4), w, h, 2, budget)
        n = inst.num_decision
    elif k is PuzzleKind.MOSAIC:
        nsol, nodes, out = _solve_mosaic_raw(
            *_clue_bounds(inst.clues.ravel(), 9), w, h, 2, budget)
        n = inst.num_decision
    elif k is PuzzleKind.UNRULY:
        given = inst.givens.ravel().astype(np.int8).copy()
        given[given < 0] = 0
        first = np.full(w * h, UNRULY_WHITE, dtype=np.int8)
        nsol, nodes, out = _solve_unruly_raw(given, first, w, h, 2, budget)
        n = inst.num_decision
    else:
        return solve(inst, cap=2)
    if nsol < 2 and nodes >= budget:
        return None
    sols = [out[i * n:(i + 1) * n].copy() for i in range(nsol)]
    return SolveResult(solutions=sols, nodes_expanded=int(nodes), cap=2)


def generate(kind: PuzzleKind, size: GridSpec, seed: int) -> PuzzleInstance:
    """Generate a unique-solution instance, deterministic in (kind, size, seed)."""
    size.validate_for(kind)
    w, h = size.width, size.height
    for attempt in range(RETRY_BUDGET):
        rng = _rng_for(kind, w, h, seed, attempt)
        inst = _GENERATORS[kind](rng, w, h, seed)
        if inst is None:
            continue
        if kind in (PuzzleKind.TENTS, PuzzleKind.LIGHTUP, PuzzleKind.NET):
            return inst  # recipe ends with the full cap-2 uniqueness solve
        result = _verify_unique(inst, VERIFY_NODE_BUDGET)
        if result is None:
            return inst  # verify aborted on budget; uniqueness held inductively
        if result.verdict != "unique":  # pragma: no cover - recipe guarantees it
            continue
        if not np.array_equal(result.solutions[0], inst.solution):
            raise GenerationError(
                f"{kind.value} {w}x{h} seed={seed}: solver solution does not "
                "match the constructed one")
        return inst
    raise GenerationError(
        f"generation retry budget exhausted for {kind.value} {w}x{h} "
        f"seed={seed} after {RETRY_BUDGET} attempts")


def count_distinct(kind: PuzzleKind, size: GridSpec, samples: int,
                   base_seed: int = 0) -> int:
    """Distinct clue layouts among `samples` generated instances.

    A lower bound on the true number of distinct configurations; uses
    consecutive seeds starting at base_seed so larger sample counts extend
    smaller ones.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    seen = set()
    for i in range(samples):
        inst = generate(kind, size, base_seed + i)
        seen.add(inst.digest())
    return len(seen)
