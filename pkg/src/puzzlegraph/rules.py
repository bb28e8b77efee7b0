"""The six rule engines: action application, violation detection, solved checks.

All functions here are pure over (instance, values); PuzzleState is a thin
mutable wrapper that caches derived flags. Violation semantics:

  Tents   - a tent touching another tent (8-neighborhood) flags both; a tree
            with no orthogonal tent and no orthogonal empty cell is flagged;
            a row/column meta node is flagged when its tent count exceeds the
            clue or tents + empty cells can no longer reach it.
  Lightup - two bulbs seeing each other along a row/column (no black square
            between) flag both; a numbered black square is flagged when its
            adjacent-bulb count exceeds the clue or bulbs + adjacent empty
            cells fall short of it.
  Mosaic  - a clue cell is flagged when decided-black count in its 3x3 region
            exceeds the clue, or black + undecided falls short.
  Loopy   - a face meta node is flagged when drawn lines exceed its clue or
            drawn + undecided fall short; a vertex with drawn-degree > 2
            flags its incident drawn edges.
  Unruly  - three-in-a-row of one color flags the participating cells
            (horizontal/vertical channels); a line with more than half its
            cells in one color sets the number-violation channel on every
            cell of the line and on the line's meta node.
  Net     - no violations exist; there are no invalid moves.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .core import (
    LIGHTUP_BULB, LIGHTUP_EMPTY, LOOPY_LINE, LOOPY_NOLINE, LOOPY_UNDECIDED,
    MOSAIC_BLACK, MOSAIC_UNMARKED, MOSAIC_WHITE, NET_E, NET_N, NET_S, NET_W,
    NUM_ACTIONS, TENTS_EMPTY, TENTS_GRASS, TENTS_TENT,
    TENTS_TREE, UNRULY_BLACK, UNRULY_EMPTY, UNRULY_WHITE, PuzzleInstance,
    PuzzleKind, net_mask_period, net_rotate_mask,
)

# value written by each action id; -1 keeps the current value (DO NOTHING)
_ACTION_TARGET = {
    PuzzleKind.TENTS: np.array([TENTS_TENT, TENTS_GRASS, TENTS_EMPTY, -1], dtype=np.int8),
    PuzzleKind.MOSAIC: np.array([MOSAIC_BLACK, MOSAIC_WHITE, MOSAIC_UNMARKED, -1], dtype=np.int8),
    PuzzleKind.LOOPY: np.array([LOOPY_LINE, LOOPY_NOLINE, LOOPY_UNDECIDED, -1], dtype=np.int8),
    PuzzleKind.LIGHTUP: np.array([LIGHTUP_BULB, LIGHTUP_EMPTY, -1], dtype=np.int8),
    PuzzleKind.UNRULY: np.array([UNRULY_WHITE, UNRULY_BLACK, -1], dtype=np.int8),
}
# Net: action id -> number of clockwise quarter turns
_NET_TURNS = np.array([1, 2, 3, 0], dtype=np.int8)

# connector mask rotated k quarter turns, ROT[mask, k]
ROT_TABLE = np.array(
    [[net_rotate_mask(m, k) for k in range(4)] for m in range(16)], dtype=np.uint8)
PERIOD_TABLE = np.array([net_mask_period(m) for m in range(16)], dtype=np.int8)


@dataclass
class ViolationFlags:
    """Per-node violation flags: decision cells in canonical order, then metas."""

    cell: np.ndarray
    meta: np.ndarray | None = None
    channels: dict = field(default_factory=dict)


def initial_values(instance: PuzzleInstance) -> np.ndarray:
    n = instance.num_decision
    values = np.zeros(n, dtype=np.int8)
    if instance.kind is PuzzleKind.TENTS:
        values[instance.trees.ravel()] = TENTS_TREE
    elif instance.kind is PuzzleKind.UNRULY:
        g = instance.givens.ravel()
        values[g >= 0] = g[g >= 0]
    return values


def fixed_mask(instance: PuzzleInstance) -> np.ndarray:
    """Cells whose value never changes under actions (givens)."""
    if instance.kind is PuzzleKind.TENTS:
        return instance.trees.ravel().copy()
    if instance.kind is PuzzleKind.LIGHTUP:
        return instance.black.ravel().copy()
    if instance.kind is PuzzleKind.UNRULY:
        return (instance.givens.ravel() >= 0)
    return np.zeros(instance.num_decision, dtype=bool)


def net_periods(instance: PuzzleInstance) -> np.ndarray:
    """Per-tile rotational symmetry period (Net only)."""
    return PERIOD_TABLE[instance.tiles.ravel()]


class PuzzleState:
    """Mutable board: per-cell values plus cached derived flags.

    Confined to a single environment at a time; apply_actions returns a new
    state rather than mutating.
    """

    __slots__ = ("instance", "values", "_flags", "_solved")

    def __init__(self, instance: PuzzleInstance, values: np.ndarray):
        self.instance = instance
        self.values = values
        self._flags = None
        self._solved = None

    @classmethod
    def initial(cls, instance: PuzzleInstance) -> "PuzzleState":
        return cls(instance, initial_values(instance))

    @classmethod
    def solved_state(cls, instance: PuzzleInstance) -> "PuzzleState":
        return cls(instance, instance.solution.astype(np.int8).copy())

    @property
    def kind(self) -> PuzzleKind:
        return self.instance.kind

    def flags(self) -> ViolationFlags:
        if self._flags is None:
            self._flags = violations(self)
        return self._flags

    @property
    def solved(self) -> bool:
        if self._solved is None:
            self._solved = is_solved(self)
        return self._solved


def apply_actions(state: PuzzleState, actions: np.ndarray) -> PuzzleState:
    """Apply one action per decision cell, all simultaneously.

    Each cell transitions independently; actions on fixed cells are ignored.
    """
    inst = state.instance
    actions = np.asarray(actions)
    n = inst.num_decision
    if actions.shape != (n,):
        raise ValueError(f"action vector has shape {actions.shape}, expected ({n},)")
    num_a = NUM_ACTIONS[inst.kind]
    if actions.min(initial=0) < 0 or actions.max(initial=0) >= num_a:
        raise ValueError(f"action id out of range [0, {num_a})")
    values = state.values
    if inst.kind is PuzzleKind.NET:
        periods = net_periods(inst)
        new = ((values + _NET_TURNS[actions]) % periods).astype(np.int8)
    else:
        target = _ACTION_TARGET[inst.kind][actions]
        new = np.where(target < 0, values, target).astype(np.int8)
        fixed = fixed_mask(inst)
        new[fixed] = values[fixed]
    return PuzzleState(inst, new)


def _neighbor_count(mask: np.ndarray, eight: bool) -> np.ndarray:
    h, w = mask.shape
    p = np.zeros((h + 2, w + 2), dtype=np.int16)
    p[1:-1, 1:-1] = mask
    c = p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:]
    if eight:
        c += p[:-2, :-2] + p[:-2, 2:] + p[2:, :-2] + p[2:, 2:]
    return c


def _tents_flags(inst: PuzzleInstance, values: np.ndarray) -> ViolationFlags:
    h, w = inst.height, inst.width
    grid = values.reshape(h, w)
    tents = grid == TENTS_TENT
    trees = inst.trees
    empty = (grid == TENTS_EMPTY) & ~trees
    tent_flag = tents & (_neighbor_count(tents, eight=True) > 0)
    tree_flag = trees & (_neighbor_count(tents, eight=False) == 0) \
        & (_neighbor_count(empty, eight=False) == 0)
    trow = tents.sum(axis=1)
    tcol = tents.sum(axis=0)
    erow = empty.sum(axis=1)
    ecol = empty.sum(axis=0)
    row_bad = (trow > inst.row_clues) | (trow + erow < inst.row_clues)
    col_bad = (tcol > inst.col_clues) | (tcol + ecol < inst.col_clues)
    return ViolationFlags(cell=(tent_flag | tree_flag).ravel(),
                          meta=np.concatenate([row_bad, col_bad]))


def lightup_segments(inst: PuzzleInstance, values: np.ndarray):
    """Per-cell bulb counts of the row segment and column segment the cell is in."""
    h, w = inst.height, inst.width
    grid = values.reshape(h, w)
    black = inst.black
    bulbs = (grid == LIGHTUP_BULB) & ~black
    row_seg = np.cumsum(black, axis=1, dtype=np.int32)
    row_id = np.arange(h, dtype=np.int32)[:, None] * (w + 1) + row_seg
    row_counts = np.bincount(row_id[bulbs], minlength=h * (w + 1))
    col_seg = np.cumsum(black, axis=0, dtype=np.int32)
    col_id = np.arange(w, dtype=np.int32)[None, :] * (h + 1) + col_seg
    col_counts = np.bincount(col_id[bulbs], minlength=w * (h + 1))
    return bulbs, row_counts[row_id], col_counts[col_id]


def lightup_lit(inst: PuzzleInstance, values: np.ndarray) -> np.ndarray:
    """A cell is lit iff a bulb shares its row/column with no black square
    between them; flat canonical order."""
    _, rc, cc = lightup_segments(inst, values)
    return (~inst.black & ((rc > 0) | (cc > 0))).ravel()


def _lightup_flags(inst: PuzzleInstance, values: np.ndarray) -> ViolationFlags:
    h, w = inst.height, inst.width
    grid = values.reshape(h, w)
    bulbs, rc, cc = lightup_segments(inst, values)
    bulb_flag = bulbs & ((rc > 1) | (cc > 1))
    numbered = inst.black & (inst.clues >= 0)
    adj_bulbs = _neighbor_count(bulbs, eight=False)
    adj_empty = _neighbor_count(~inst.black & (grid == LIGHTUP_EMPTY), eight=False)
    black_flag = numbered & ((adj_bulbs > inst.clues) | (adj_bulbs + adj_empty < inst.clues))
    lit = ~inst.black & ((rc > 0) | (cc > 0))
    return ViolationFlags(cell=(bulb_flag | black_flag).ravel(),
                          channels={"lit": lit.ravel()})


def _mosaic_region_counts(inst: PuzzleInstance, values: np.ndarray):
    h, w = inst.height, inst.width
    grid = values.reshape(h, w)
    blacks = grid == MOSAIC_BLACK
    und = grid == MOSAIC_UNMARKED
    b3 = _neighbor_count(blacks, eight=True) + blacks
    u3 = _neighbor_count(und, eight=True) + und
    return b3, u3


def _mosaic_flags(inst: PuzzleInstance, values: np.ndarray) -> ViolationFlags:
    b3, u3 = _mosaic_region_counts(inst, values)
    has = inst.clues >= 0
    flag = has & ((b3 > inst.clues) | (b3 + u3 < inst.clues))
    solved_cells = has & (u3 == 0) & (b3 == inst.clues)
    return ViolationFlags(cell=flag.ravel(),
                          channels={"solved_cells": solved_cells.ravel()})


def loopy_grids(inst: PuzzleInstance, values: np.ndarray):
    """Split the flat edge sequence into horizontal and vertical edge grids."""
    h, w = inst.height, inst.width
    nh = w * (h + 1)
    return values[:nh].reshape(h + 1, w), values[nh:].reshape(h, w + 1)


def loopy_vertex_degrees(inst: PuzzleInstance, values: np.ndarray) -> np.ndarray:
    h, w = inst.height, inst.width
    H, V = loopy_grids(inst, values)
    deg = np.zeros((h + 1, w + 1), dtype=np.int8)
    hl = (H == LOOPY_LINE)
    vl = (V == LOOPY_LINE)
    deg[:, :-1] += hl
    deg[:, 1:] += hl
    deg[:-1, :] += vl
    deg[1:, :] += vl
    return deg


def _loopy_flags(inst: PuzzleInstance, values: np.ndarray) -> ViolationFlags:
    h, w = inst.height, inst.width
    H, V = loopy_grids(inst, values)
    hl, hu = (H == LOOPY_LINE), (H == LOOPY_UNDECIDED)
    vl, vu = (V == LOOPY_LINE), (V == LOOPY_UNDECIDED)
    face_line = hl[:h].astype(np.int16) + hl[1:] + vl[:, :w] + vl[:, 1:]
    face_und = hu[:h].astype(np.int16) + hu[1:] + vu[:, :w] + vu[:, 1:]
    has = inst.clues >= 0
    meta = has & ((face_line > inst.clues) | (face_line + face_und < inst.clues))
    deg = loopy_vertex_degrees(inst, values)
    over = deg > 2
    flag_h = hl & (over[:, :-1] | over[:, 1:])
    flag_v = vl & (over[:-1, :] | over[1:, :])
    return ViolationFlags(cell=np.concatenate([flag_h.ravel(), flag_v.ravel()]),
                          meta=meta.ravel())


def _unruly_flags(inst: PuzzleInstance, values: np.ndarray) -> ViolationFlags:
    h, w = inst.height, inst.width
    grid = values.reshape(h, w)
    hflag = np.zeros((h, w), dtype=bool)
    vflag = np.zeros((h, w), dtype=bool)
    for color in (UNRULY_WHITE, UNRULY_BLACK):
        c = grid == color
        run = c[:, :-2] & c[:, 1:-1] & c[:, 2:]
        hflag[:, :-2] |= run
        hflag[:, 1:-1] |= run
        hflag[:, 2:] |= run
        run = c[:-2, :] & c[1:-1, :] & c[2:, :]
        vflag[:-2, :] |= run
        vflag[1:-1, :] |= run
        vflag[2:, :] |= run
    white = grid == UNRULY_WHITE
    black = grid == UNRULY_BLACK
    row_bad = (white.sum(axis=1) > w // 2) | (black.sum(axis=1) > w // 2)
    col_bad = (white.sum(axis=0) > h // 2) | (black.sum(axis=0) > h // 2)
    numflag = row_bad[:, None] | col_bad[None, :]
    meta = np.concatenate([row_bad, col_bad])
    return ViolationFlags(
        cell=(hflag | vflag | numflag).ravel(),
        meta=meta,
        channels={"horizontal": hflag.ravel(), "vertical": vflag.ravel(),
                  "number": numflag.ravel()})


def violations(state: PuzzleState) -> ViolationFlags:
    """Per-node violation flags for the state's kind. Net has none."""
    inst, values = state.instance, state.values
    kind = inst.kind
    if kind is PuzzleKind.TENTS:
        return _tents_flags(inst, values)
    if kind is PuzzleKind.LIGHTUP:
        return _lightup_flags(inst, values)
    if kind is PuzzleKind.MOSAIC:
        return _mosaic_flags(inst, values)
    if kind is PuzzleKind.LOOPY:
        return _loopy_flags(inst, values)
    if kind is PuzzleKind.UNRULY:
        return _unruly_flags(inst, values)
    return ViolationFlags(cell=np.zeros(inst.num_decision, dtype=bool))


def net_shapes(inst: PuzzleInstance, values: np.ndarray) -> np.ndarray:
    """Current connector mask per tile given the orientation values."""
    return ROT_TABLE[inst.tiles.ravel(), values.astype(np.intp)].reshape(inst.height, inst.width)


def net_connected(inst: PuzzleInstance, values: np.ndarray) -> np.ndarray:
    """Cells reachable from the source via mutually-facing connectors."""
    h, w = inst.height, inst.width
    shapes = net_shapes(inst, values)
    reach = np.zeros((h, w), dtype=bool)
    sx, sy = inst.source
    reach[sy, sx] = True
    queue = deque([(sx, sy)])
    while queue:
        x, y = queue.popleft()
        m = shapes[y, x]
        if m & NET_E and x + 1 < w and shapes[y, x + 1] & NET_W and not reach[y, x + 1]:
            reach[y, x + 1] = True
            queue.append((x + 1, y))
        if m & NET_W and x > 0 and shapes[y, x - 1] & NET_E and not reach[y, x - 1]:
            reach[y, x - 1] = True
            queue.append((x - 1, y))
        if m & NET_S and y + 1 < h and shapes[y + 1, x] & NET_N and not reach[y + 1, x]:
            reach[y + 1, x] = True
            queue.append((x, y + 1))
        if m & NET_N and y > 0 and shapes[y - 1, x] & NET_S and not reach[y - 1, x]:
            reach[y - 1, x] = True
            queue.append((x, y - 1))
    return reach


def _loopy_single_loop(inst: PuzzleInstance, values: np.ndarray) -> bool:
    deg = loopy_vertex_degrees(inst, values)
    if not np.isin(deg, (0, 2)).all():
        return False
    H, V = loopy_grids(inst, values)
    hl, vl = H == LOOPY_LINE, V == LOOPY_LINE
    total_lines = int(hl.sum() + vl.sum())
    if total_lines == 0:
        return False
    # walk the cycle from any line vertex; a single loop visits exactly
    # total_lines vertices (|E| == |V| on a cycle)
    ys, xs = np.nonzero(deg == 2)
    start = (int(xs[0]), int(ys[0]))
    seen = {start}
    queue = deque([start])
    h, w = inst.height, inst.width
    while queue:
        x, y = queue.popleft()
        steps = []
        if x < w and hl[y, x]:
            steps.append((x + 1, y))
        if x > 0 and hl[y, x - 1]:
            steps.append((x - 1, y))
        if y < h and vl[y, x]:
            steps.append((x, y + 1))
        if y > 0 and vl[y - 1, x]:
            steps.append((x, y - 1))
        for nxt in steps:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == total_lines


def is_solved(state: PuzzleState) -> bool:
    """True iff every rulebook constraint of the kind holds."""
    inst, values = state.instance, state.values
    kind = inst.kind
    h, w = inst.height, inst.width
    if kind is PuzzleKind.NET:
        return bool(net_connected(inst, values).all())
    if kind is PuzzleKind.TENTS:
        grid = values.reshape(h, w)
        tents = grid == TENTS_TENT
        if ((grid == TENTS_EMPTY) & ~inst.trees).any():
            return False
        if (tents & (_neighbor_count(tents, eight=True) > 0)).any():
            return False
        if (tents.sum(axis=1) != inst.row_clues).any():
            return False
        if (tents.sum(axis=0) != inst.col_clues).any():
            return False
        tree_adj = _neighbor_count(tents, eight=False)
        return bool((tree_adj[inst.trees] == 1).all())
    if kind is PuzzleKind.LIGHTUP:
        bulbs, rc, cc = lightup_segments(inst, values)
        open_ = ~inst.black
        if not ((rc > 0) | (cc > 0))[open_].all():
            return False
        if (bulbs & ((rc > 1) | (cc > 1))).any():
            return False
        numbered = inst.black & (inst.clues >= 0)
        adj = _neighbor_count(bulbs, eight=False)
        return bool((adj[numbered] == inst.clues[numbered]).all())
    if kind is PuzzleKind.MOSAIC:
        grid = values.reshape(h, w)
        if (grid == MOSAIC_UNMARKED).any():
            return False
        b3, _ = _mosaic_region_counts(inst, values)
        has = inst.clues >= 0
        return bool((b3[has] == inst.clues[has]).all())
    if kind is PuzzleKind.LOOPY:
        if (values == LOOPY_UNDECIDED).any():
            return False
        H, V = loopy_grids(inst, values)
        hl, vl = H == LOOPY_LINE, V == LOOPY_LINE
        face_line = hl[:h].astype(np.int16) + hl[1:] + vl[:, :w] + vl[:, 1:]
        has = inst.clues >= 0
        if (face_line[has] != inst.clues[has]).any():
            return False
        return _loopy_single_loop(inst, values)
    if kind is PuzzleKind.UNRULY:
        grid = values.reshape(h, w)
        if (grid == UNRULY_EMPTY).any():
            return False
        flags = _unruly_flags(inst, values)
        if flags.cell.any():
            return False
        white = grid == UNRULY_WHITE
        return bool((white.sum(axis=1) == w // 2).all()
                    and (white.sum(axis=0) == h // 2).all())
    raise AssertionError(kind)
