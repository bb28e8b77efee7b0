"""Independent naive re-implementations used as test oracles.

Everything here is written with plain Python loops, separately from the
vectorized engines in puzzlegraph.rules and the solver kernels, so the two
routes can be compared bit for bit.
"""
from __future__ import annotations

import itertools

import numpy as np

from puzzlegraph.core import (
    LIGHTUP_BULB, LOOPY_LINE, LOOPY_NOLINE, LOOPY_UNDECIDED, MOSAIC_BLACK,
    MOSAIC_UNMARKED, NET_E, NET_N, NET_S, NET_W, PuzzleKind, TENTS_EMPTY,
    TENTS_GRASS, TENTS_TENT, TENTS_TREE, UNRULY_BLACK, UNRULY_EMPTY,
    UNRULY_WHITE, net_mask_period, net_rotate_mask,
)

ORTH = ((0, -1), (0, 1), (-1, 0), (1, 0))
EIGHT = tuple((dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if (dy, dx) != (0, 0))


def _grid(inst, values):
    return np.asarray(values).reshape(inst.height, inst.width)


def naive_cell_and_meta_flags(inst, values):
    """Full-rescan violation flags per the rulebook; independent of rules.py."""
    kind, w, h = inst.kind, inst.width, inst.height
    if kind is PuzzleKind.NET:
        return np.zeros(w * h, dtype=bool), None

    if kind is PuzzleKind.TENTS:
        g = _grid(inst, values)
        cell = np.zeros((h, w), dtype=bool)
        for y in range(h):
            for x in range(w):
                if g[y, x] == TENTS_TENT:
                    for dy, dx in EIGHT:
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < h and 0 <= nx < w and g[ny, nx] == TENTS_TENT:
                            cell[y, x] = True
                if inst.trees[y, x]:
                    has_tent = False
                    has_empty = False
                    for dy, dx in ORTH:
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < h and 0 <= nx < w:
                            if g[ny, nx] == TENTS_TENT:
                                has_tent = True
                            if g[ny, nx] == TENTS_EMPTY and not inst.trees[ny, nx]:
                                has_empty = True
                    if not has_tent and not has_empty:
                        cell[y, x] = True
        meta = []
        for y in range(h):
            tents = sum(g[y, x] == TENTS_TENT for x in range(w))
            empt = sum(g[y, x] == TENTS_EMPTY and not inst.trees[y, x] for x in range(w))
            meta.append(tents > inst.row_clues[y] or tents + empt < inst.row_clues[y])
        for x in range(w):
            tents = sum(g[y, x] == TENTS_TENT for y in range(h))
            empt = sum(g[y, x] == TENTS_EMPTY and not inst.trees[y, x] for y in range(h))
            meta.append(tents > inst.col_clues[x] or tents + empt < inst.col_clues[x])
        return cell.ravel(), np.array(meta, dtype=bool)

    if kind is PuzzleKind.LIGHTUP:
        g = _grid(inst, values)
        cell = np.zeros((h, w), dtype=bool)
        for y in range(h):
            for x in range(w):
                if inst.black[y, x]:
                    if inst.clues[y, x] >= 0:
                        bulbs = 0
                        empt = 0
                        for dy, dx in ORTH:
                            ny, nx = y + dy, x + dx
                            if 0 <= ny < h and 0 <= nx < w and not inst.black[ny, nx]:
                                if g[ny, nx] == LIGHTUP_BULB:
                                    bulbs += 1
                                else:
                                    empt += 1
                        if bulbs > inst.clues[y, x] or bulbs + empt < inst.clues[y, x]:
                            cell[y, x] = True
                elif g[y, x] == LIGHTUP_BULB:
                    for dy, dx in ORTH:
                        ny, nx = y + dy, x + dx
                        while 0 <= ny < h and 0 <= nx < w and not inst.black[ny, nx]:
                            if g[ny, nx] == LIGHTUP_BULB:
                                cell[y, x] = True
                            ny += dy
                            nx += dx
        return cell.ravel(), None

    if kind is PuzzleKind.MOSAIC:
        g = _grid(inst, values)
        cell = np.zeros((h, w), dtype=bool)
        for y in range(h):
            for x in range(w):
                clue = inst.clues[y, x]
                if clue < 0:
                    continue
                blacks = 0
                und = 0
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < h and 0 <= nx < w:
                            if g[ny, nx] == MOSAIC_BLACK:
                                blacks += 1
                            elif g[ny, nx] == MOSAIC_UNMARKED:
                                und += 1
                if blacks > clue or blacks + und < clue:
                    cell[y, x] = True
        return cell.ravel(), None

    if kind is PuzzleKind.LOOPY:
        H, V = loopy_split(inst, values)
        cell_h = np.zeros((h + 1, w), dtype=bool)
        cell_v = np.zeros((h, w + 1), dtype=bool)
        deg = np.zeros((h + 1, w + 1), dtype=int)
        for y in range(h + 1):
            for x in range(w):
                if H[y, x] == LOOPY_LINE:
                    deg[y, x] += 1
                    deg[y, x + 1] += 1
        for y in range(h):
            for x in range(w + 1):
                if V[y, x] == LOOPY_LINE:
                    deg[y, x] += 1
                    deg[y + 1, x] += 1
        for y in range(h + 1):
            for x in range(w):
                if H[y, x] == LOOPY_LINE and (deg[y, x] > 2 or deg[y, x + 1] > 2):
                    cell_h[y, x] = True
        for y in range(h):
            for x in range(w + 1):
                if V[y, x] == LOOPY_LINE and (deg[y, x] > 2 or deg[y + 1, x] > 2):
                    cell_v[y, x] = True
        meta = np.zeros((h, w), dtype=bool)
        for y in range(h):
            for x in range(w):
                clue = inst.clues[y, x]
                if clue < 0:
                    continue
                edges = [H[y, x], H[y + 1, x], V[y, x], V[y, x + 1]]
                lines = sum(e == LOOPY_LINE for e in edges)
                und = sum(e == LOOPY_UNDECIDED for e in edges)
                if lines > clue or lines + und < clue:
                    meta[y, x] = True
        return np.concatenate([cell_h.ravel(), cell_v.ravel()]), meta.ravel()

    if kind is PuzzleKind.UNRULY:
        g = _grid(inst, values)
        cell = np.zeros((h, w), dtype=bool)
        for y in range(h):
            for x in range(w - 2):
                if g[y, x] != UNRULY_EMPTY and g[y, x] == g[y, x + 1] == g[y, x + 2]:
                    cell[y, x] = cell[y, x + 1] = cell[y, x + 2] = True
        for x in range(w):
            for y in range(h - 2):
                if g[y, x] != UNRULY_EMPTY and g[y, x] == g[y + 1, x] == g[y + 2, x]:
                    cell[y, x] = cell[y + 1, x] = cell[y + 2, x] = True
        row_bad = []
        for y in range(h):
            whites = sum(g[y, x] == UNRULY_WHITE for x in range(w))
            blacks = sum(g[y, x] == UNRULY_BLACK for x in range(w))
            row_bad.append(whites > w // 2 or blacks > w // 2)
        col_bad = []
        for x in range(w):
            whites = sum(g[y, x] == UNRULY_WHITE for y in range(h))
            blacks = sum(g[y, x] == UNRULY_BLACK for y in range(h))
            col_bad.append(whites > h // 2 or blacks > h // 2)
        for y in range(h):
            for x in range(w):
                if row_bad[y] or col_bad[x]:
                    cell[y, x] = True
        return cell.ravel(), np.array(row_bad + col_bad, dtype=bool)

    raise AssertionError(kind)


def loopy_split(inst, values):
    w, h = inst.width, inst.height
    nh = w * (h + 1)
    arr = np.asarray(values)
    return arr[:nh].reshape(h + 1, w), arr[nh:].reshape(h, w + 1)


def lightup_lit_oracle(inst, values) -> np.ndarray:
    """Ray-cast: a cell is lit iff a bulb shares its row/column with no
    black square strictly between them."""
    w, h = inst.width, inst.height
    g = _grid(inst, values)
    lit = np.zeros((h, w), dtype=bool)
    for y in range(h):
        for x in range(w):
            if inst.black[y, x]:
                continue
            if g[y, x] == LIGHTUP_BULB:
                lit[y, x] = True
                continue
            for dy, dx in ORTH:
                ny, nx = y + dy, x + dx
                while 0 <= ny < h and 0 <= nx < w and not inst.black[ny, nx]:
                    if g[ny, nx] == LIGHTUP_BULB:
                        lit[y, x] = True
                    ny += dy
                    nx += dx
    return lit.ravel()


def net_connected_oracle(inst, values) -> np.ndarray:
    w, h = inst.width, inst.height
    shapes = {}
    for y in range(h):
        for x in range(w):
            shapes[(x, y)] = net_rotate_mask(int(inst.tiles[y, x]),
                                             int(values[y * w + x]))
    seen = {inst.source}
    frontier = [inst.source]
    while frontier:
        x, y = frontier.pop()
        m = shapes[(x, y)]
        for bit, dx, dy, opposite in ((NET_E, 1, 0, NET_W), (NET_W, -1, 0, NET_E),
                                      (NET_S, 0, 1, NET_N), (NET_N, 0, -1, NET_S)):
            nx, ny = x + dx, y + dy
            if m & bit and 0 <= nx < w and 0 <= ny < h \
                    and shapes[(nx, ny)] & opposite and (nx, ny) not in seen:
                seen.add((nx, ny))
                frontier.append((nx, ny))
    out = np.zeros((h, w), dtype=bool)
    for x, y in seen:
        out[y, x] = True
    return out.ravel()


# --- win condition checkers (for brute-force enumeration) -------------------


def solution_valid(inst, values) -> bool:
    kind, w, h = inst.kind, inst.width, inst.height
    g = np.asarray(values)
    if kind is PuzzleKind.NET:
        return bool(net_connected_oracle(inst, values).all())
    if kind is PuzzleKind.TENTS:
        grid = g.reshape(h, w)
        for y in range(h):
            for x in range(w):
                if not inst.trees[y, x] and grid[y, x] == TENTS_EMPTY:
                    return False
                if grid[y, x] == TENTS_TENT:
                    for dy, dx in EIGHT:
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < h and 0 <= nx < w and grid[ny, nx] == TENTS_TENT:
                            return False
        for y in range(h):
            if sum(grid[y, x] == TENTS_TENT for x in range(w)) != inst.row_clues[y]:
                return False
        for x in range(w):
            if sum(grid[y, x] == TENTS_TENT for y in range(h)) != inst.col_clues[x]:
                return False
        for y in range(h):
            for x in range(w):
                if inst.trees[y, x]:
                    tents = sum(
                        1 for dy, dx in ORTH
                        if 0 <= y + dy < h and 0 <= x + dx < w
                        and grid[y + dy, x + dx] == TENTS_TENT)
                    if tents != 1:
                        return False
        return True
    if kind is PuzzleKind.LIGHTUP:
        lit = lightup_lit_oracle(inst, values).reshape(h, w)
        grid = g.reshape(h, w)
        for y in range(h):
            for x in range(w):
                if not inst.black[y, x] and not lit[y, x]:
                    return False
                if not inst.black[y, x] and grid[y, x] == LIGHTUP_BULB:
                    for dy, dx in ORTH:
                        ny, nx = y + dy, x + dx
                        while 0 <= ny < h and 0 <= nx < w and not inst.black[ny, nx]:
                            if grid[ny, nx] == LIGHTUP_BULB:
                                return False
                            ny += dy
                            nx += dx
                if inst.black[y, x] and inst.clues[y, x] >= 0:
                    bulbs = sum(
                        1 for dy, dx in ORTH
                        if 0 <= y + dy < h and 0 <= x + dx < w
                        and not inst.black[y + dy, x + dx]
                        and grid[y + dy, x + dx] == LIGHTUP_BULB)
                    if bulbs != inst.clues[y, x]:
                        return False
        return True
    if kind is PuzzleKind.MOSAIC:
        grid = g.reshape(h, w)
        if (grid == MOSAIC_UNMARKED).any():
            return False
        for y in range(h):
            for x in range(w):
                clue = inst.clues[y, x]
                if clue < 0:
                    continue
                blacks = sum(
                    grid[ny, nx] == MOSAIC_BLACK
                    for ny in range(max(0, y - 1), min(h, y + 2))
                    for nx in range(max(0, x - 1), min(w, x + 2)))
                if blacks != clue:
                    return False
        return True
    if kind is PuzzleKind.LOOPY:
        if (g == LOOPY_UNDECIDED).any():
            return False
        H, V = loopy_split(inst, g)
        for y in range(h):
            for x in range(w):
                clue = inst.clues[y, x]
                if clue < 0:
                    continue
                lines = sum(e == LOOPY_LINE for e in
                            (H[y, x], H[y + 1, x], V[y, x], V[y, x + 1]))
                if lines != clue:
                    return False
        return loopy_single_loop_oracle(inst, g)
    if kind is PuzzleKind.UNRULY:
        grid = g.reshape(h, w)
        if (grid == UNRULY_EMPTY).any():
            return False
        for y in range(h):
            for x in range(w - 2):
                if grid[y, x] == grid[y, x + 1] == grid[y, x + 2]:
                    return False
        for x in range(w):
            for y in range(h - 2):
                if grid[y, x] == grid[y + 1, x] == grid[y + 2, x]:
                    return False
        for y in range(h):
            if sum(grid[y, x] == UNRULY_WHITE for x in range(w)) != w // 2:
                return False
        for x in range(w):
            if sum(grid[y, x] == UNRULY_WHITE for y in range(h)) != h // 2:
                return False
        return True
    raise AssertionError(kind)


def loopy_single_loop_oracle(inst, values) -> bool:
    """Walk the drawn lines: one closed cycle covering every line edge."""
    w, h = inst.width, inst.height
    H, V = loopy_split(inst, values)
    edges = set()
    for y in range(h + 1):
        for x in range(w):
            if H[y, x] == LOOPY_LINE:
                edges.add(((x, y), (x + 1, y)))
    for y in range(h):
        for x in range(w + 1):
            if V[y, x] == LOOPY_LINE:
                edges.add(((x, y), (x, y + 1)))
    if not edges:
        return False
    deg: dict = {}
    adj: dict = {}
    for a, b in edges:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(d != 2 for d in deg.values()):
        return False
    start = next(iter(deg))
    prev, cur = None, start
    visited_edges = 0
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        # degree 2 means exactly one way forward (two at the very start)
        step = nxt[0]
        visited_edges += 1
        prev, cur = cur, step
        if cur == start:
            break
    return visited_edges == len(edges)


def cell_domains(inst) -> list[list[int]]:
    """Per-decision-cell candidate values for full assignments."""
    kind, w, h = inst.kind, inst.width, inst.height
    if kind is PuzzleKind.NET:
        return [list(range(net_mask_period(int(m)))) for m in inst.tiles.ravel()]
    if kind is PuzzleKind.TENTS:
        return [[TENTS_TREE] if t else [TENTS_GRASS, TENTS_TENT]
                for t in inst.trees.ravel()]
    if kind is PuzzleKind.LIGHTUP:
        return [[0] if b else [0, LIGHTUP_BULB] for b in inst.black.ravel()]
    if kind is PuzzleKind.MOSAIC:
        return [[1, 2]] * (w * h)
    if kind is PuzzleKind.LOOPY:
        return [[LOOPY_NOLINE, LOOPY_LINE]] * (2 * w * h + w + h)
    if kind is PuzzleKind.UNRULY:
        return [[int(v)] if v >= 0 else [UNRULY_WHITE, UNRULY_BLACK]
                for v in inst.givens.ravel()]
    raise AssertionError(kind)


def brute_force_solutions(inst) -> list[np.ndarray]:
    """All complete assignments satisfying the win conditions (tiny sizes)."""
    sols = []
    for combo in itertools.product(*cell_domains(inst)):
        arr = np.array(combo, dtype=np.int8)
        if solution_valid(inst, arr):
            sols.append(arr)
    return sols


def random_state_values(inst, rng) -> np.ndarray:
    """Uniform random values over non-fixed decision cells."""
    from puzzlegraph.rules import initial_values, net_periods

    kind = inst.kind
    n = inst.num_decision
    values = initial_values(inst)
    if kind is PuzzleKind.NET:
        periods = net_periods(inst)
        return (rng.integers(0, 4, size=n) % periods).astype(np.int8)
    if kind is PuzzleKind.TENTS:
        free = ~inst.trees.ravel()
        values[free] = rng.integers(0, 3, size=int(free.sum()))
    elif kind is PuzzleKind.LIGHTUP:
        free = ~inst.black.ravel()
        values[free] = rng.integers(0, 2, size=int(free.sum()))
    elif kind in (PuzzleKind.MOSAIC, PuzzleKind.LOOPY):
        values[:] = rng.integers(0, 3, size=n)
    elif kind is PuzzleKind.UNRULY:
        free = inst.givens.ravel() < 0
        values[free] = rng.integers(0, 3, size=int(free.sum()))
    return values.astype(np.int8)
