"""State-to-graph encoding: the agent-facing observation.

Topology per kind (decision nodes first, in canonical order, then metas):

  Net / Lightup - one node per cell, edges between orthogonal neighbors.
  Mosaic        - one node per cell, edges include diagonal neighbors.
  Tents/Unruly  - cell nodes with orthogonal edges, plus one meta node per
                  row and per column linked to every cell of its line.
  Loopy         - one decision node per grid-edge; two grid-edges are
                  adjacent iff they share a vertex; one meta node per face
                  linked to its four surrounding grid-edges.

Edge features are a direction one-hot (where the target lies relative to
the source; cell->meta and meta->cell links get their own types). Node
features follow the per-kind layouts listed in `FEATURE_NAMES`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    LIGHTUP_BULB, NET_E, NET_N, NET_S, NET_W,
    NUM_ACTIONS, PuzzleKind, decision_count, meta_count,
)
from .rules import PuzzleState, net_connected, net_shapes

FEATURE_NAMES = {
    PuzzleKind.NET: ("line_above", "line_left", "line_below", "line_right",
                     "is_source", "connected_to_source"),
    PuzzleKind.LOOPY: ("is_undecided", "is_no_line", "is_line",
                       "is_violated", "is_meta", "normalized_number"),
    PuzzleKind.MOSAIC: ("is_unmarked", "is_marked", "is_blank", "has_clue",
                        "is_solved", "is_violated", "clue_normalized"),
    PuzzleKind.TENTS: ("is_empty", "is_grass", "is_tent", "is_tree",
                       "is_violated", "is_meta", "normalized_meta_number"),
    PuzzleKind.LIGHTUP: ("is_bulb", "is_empty", "is_lighted", "is_black",
                         "is_black_numbered", "is_violated", "normalized_number"),
    PuzzleKind.UNRULY: ("is_empty", "is_white", "is_black", "is_fixed",
                        "is_meta", "violation_horizontal", "violation_vertical",
                        "violation_number"),
}

# columns of each mutually-exclusive state one-hot group (decision rows)
STATE_ONEHOT_COLUMNS = {
    PuzzleKind.NET: (),  # connector bits are independent, not a one-hot
    PuzzleKind.LOOPY: (0, 1, 2),
    PuzzleKind.MOSAIC: (0, 1, 2),
    PuzzleKind.TENTS: (0, 1, 2, 3),
    PuzzleKind.LIGHTUP: (0, 1, 2, 3, 4),
    PuzzleKind.UNRULY: (0, 1, 2),
}

_DIRS8 = ("n", "s", "e", "w", "ne", "nw", "se", "sw")

EDGE_TYPES = {
    PuzzleKind.NET: ("n", "s", "e", "w"),
    PuzzleKind.LIGHTUP: ("n", "s", "e", "w"),
    PuzzleKind.MOSAIC: _DIRS8,
    PuzzleKind.TENTS: ("n", "s", "e", "w", "cell_to_meta", "meta_to_cell"),
    PuzzleKind.UNRULY: ("n", "s", "e", "w", "cell_to_meta", "meta_to_cell"),
    PuzzleKind.LOOPY: _DIRS8 + ("cell_to_meta", "meta_to_cell"),
}


@dataclass(frozen=True)
class GraphObservation:
    """Agent-facing view of a state: nodes, typed edges, and the action mask."""

    kind: PuzzleKind
    width: int
    height: int
    node_features: np.ndarray   # float32 (num_nodes, feature_width)
    decision_mask: np.ndarray   # bool (num_nodes,), True = acting node
    edges: np.ndarray           # int32 (2, num_edges), directed src -> dst
    edge_features: np.ndarray   # float32 (num_edges, edge_feature_width)
    action_count: int

    @property
    def num_nodes(self) -> int:
        return self.node_features.shape[0]

    @property
    def num_decision(self) -> int:
        return int(self.decision_mask.sum())


def _direction(dx: float, dy: float) -> str:
    ns = "n" if dy < 0 else ("s" if dy > 0 else "")
    ew = "e" if dx > 0 else ("w" if dx < 0 else "")
    return (ns + ew) or "e"


@lru_cache(maxsize=None)
def topology(kind: PuzzleKind, width: int, height: int):
    """Static part of the observation: edges and their direction features."""
    w, h = width, height
    nd = decision_count(kind, w, h)
    nm = meta_count(kind, w, h)
    types = EDGE_TYPES[kind]
    tindex = {t: i for i, t in enumerate(types)}
    src: list[int] = []
    dst: list[int] = []
    et: list[int] = []

    def add(a: int, b: int, t: str):
        src.append(a)
        dst.append(b)
        et.append(tindex[t])

    if kind is PuzzleKind.LOOPY:
        # decision nodes are grid-edges; midpoint coordinates in half-units
        nh = w * (h + 1)
        mids = []
        for y in range(h + 1):
            for x in range(w):
                mids.append((2 * x + 1, 2 * y))
        for y in range(h):
            for x in range(w + 1):
                mids.append((2 * x, 2 * y + 1))
        # two grid-edges are adjacent iff they share a grid vertex
        incident: dict[tuple[int, int], list[int]] = {}
        for y in range(h + 1):
            for x in range(w):
                e = y * w + x
                incident.setdefault((x, y), []).append(e)
                incident.setdefault((x + 1, y), []).append(e)
        for y in range(h):
            for x in range(w + 1):
                e = nh + y * (w + 1) + x
                incident.setdefault((x, y), []).append(e)
                incident.setdefault((x, y + 1), []).append(e)
        for edges_here in incident.values():
            for a in edges_here:
                for b in edges_here:
                    if a != b:
                        add(a, b, _direction(mids[b][0] - mids[a][0],
                                             mids[b][1] - mids[a][1]))
        for y in range(h):
            for x in range(w):
                f = nd + y * w + x
                for e in (y * w + x, (y + 1) * w + x,
                          nh + y * (w + 1) + x, nh + y * (w + 1) + x + 1):
                    add(e, f, "cell_to_meta")
                    add(f, e, "meta_to_cell")
    else:
        diag = kind is PuzzleKind.MOSAIC
        for y in range(h):
            for x in range(w):
                i = y * w + x
                if y > 0:
                    add(i, i - w, "n")
                if y + 1 < h:
                    add(i, i + w, "s")
                if x + 1 < w:
                    add(i, i + 1, "e")
                if x > 0:
                    add(i, i - 1, "w")
                if diag:
                    if y > 0 and x + 1 < w:
                        add(i, i - w + 1, "ne")
                    if y > 0 and x > 0:
                        add(i, i - w - 1, "nw")
                    if y + 1 < h and x + 1 < w:
                        add(i, i + w + 1, "se")
                    if y + 1 < h and x > 0:
                        add(i, i + w - 1, "sw")
        if kind in (PuzzleKind.TENTS, PuzzleKind.UNRULY):
            for y in range(h):
                m = nd + y
                for x in range(w):
                    add(y * w + x, m, "cell_to_meta")
                    add(m, y * w + x, "meta_to_cell")
            for x in range(w):
                m = nd + h + x
                for y in range(h):
                    add(y * w + x, m, "cell_to_meta")
                    add(m, y * w + x, "meta_to_cell")

    edges = np.array([src, dst], dtype=np.int32)
    edge_features = np.zeros((len(src), len(types)), dtype=np.float32)
    edge_features[np.arange(len(src)), et] = 1.0
    decision_mask = np.zeros(nd + nm, dtype=bool)
    decision_mask[:nd] = True
    return edges, edge_features, decision_mask


def normalized_clue(kind: PuzzleKind, clue: int, span: int | None = None) -> float:
    """Clue scaled to the unit interval by its per-kind maximum.

    Tents clues are per-line; pass the line length as `span` (max clue is
    ceil(span/2) because tents cannot be adjacent).
    """
    if kind is PuzzleKind.LOOPY or kind is PuzzleKind.LIGHTUP:
        top = 4
    elif kind is PuzzleKind.MOSAIC:
        top = 9
    elif kind is PuzzleKind.TENTS:
        if span is None:
            raise ValueError("tents clue normalization needs the line length")
        top = math.ceil(span / 2)
    else:
        raise ValueError(f"{kind.value} has no numeric clues")
    if not 0 <= clue <= top:
        raise ValueError(f"clue {clue} out of range [0, {top}] for {kind.value}")
    return clue / top


def encode(state: PuzzleState) -> GraphObservation:
    """Pure function from state to observation; decision node i aligns with
    canonical sequence position i and action vector position i."""
    inst = state.instance
    kind, w, h = inst.kind, inst.width, inst.height
    edges, edge_features, decision_mask = topology(kind, w, h)
    nd = decision_count(kind, w, h)
    nm = meta_count(kind, w, h)
    values = state.values
    flags = state.flags()
    feats = np.zeros((nd + nm, len(FEATURE_NAMES[kind])), dtype=np.float32)

    if kind is PuzzleKind.NET:
        shapes = net_shapes(inst, values).ravel()
        feats[:, 0] = (shapes & NET_N) > 0
        feats[:, 1] = (shapes & NET_W) > 0
        feats[:, 2] = (shapes & NET_S) > 0
        feats[:, 3] = (shapes & NET_E) > 0
        sx, sy = inst.source
        feats[sy * w + sx, 4] = 1.0
        feats[:, 5] = net_connected(inst, values).ravel()
    elif kind is PuzzleKind.LOOPY:
        feats[np.arange(nd), values.astype(np.intp)] = 1.0
        feats[:nd, 3] = flags.cell
        clues = inst.clues.ravel()
        feats[nd:, 3] = flags.meta
        feats[nd:, 4] = 1.0
        feats[nd:, 5] = np.where(clues >= 0, clues / 4.0, 0.0)
    elif kind is PuzzleKind.MOSAIC:
        feats[np.arange(nd), values.astype(np.intp)] = 1.0
        clues = inst.clues.ravel()
        feats[:, 3] = clues >= 0
        feats[:, 4] = flags.channels["solved_cells"]
        feats[:, 5] = flags.cell
        feats[:, 6] = np.where(clues >= 0, clues / 9.0, 0.0)
    elif kind is PuzzleKind.TENTS:
        feats[np.arange(nd), values.astype(np.intp)] = 1.0
        feats[:nd, 4] = flags.cell
        feats[nd:, 4] = flags.meta
        feats[nd:, 5] = 1.0
        row_top = math.ceil(w / 2)
        col_top = math.ceil(h / 2)
        feats[nd:nd + h, 6] = inst.row_clues / row_top
        feats[nd + h:, 6] = inst.col_clues / col_top
    elif kind is PuzzleKind.LIGHTUP:
        black = inst.black.ravel()
        clues = inst.clues.ravel()
        lit = flags.channels["lit"]
        bulbs = (values == LIGHTUP_BULB) & ~black
        feats[:, 0] = bulbs
        feats[:, 1] = ~black & ~bulbs & ~lit
        feats[:, 2] = ~black & ~bulbs & lit
        feats[:, 3] = black & (clues < 0)
        feats[:, 4] = black & (clues >= 0)
        feats[:, 5] = flags.cell
        feats[:, 6] = np.where(black & (clues >= 0), clues / 4.0, 0.0)
    elif kind is PuzzleKind.UNRULY:
        feats[np.arange(nd), values.astype(np.intp)] = 1.0
        feats[:nd, 3] = inst.givens.ravel() >= 0
        feats[nd:, 4] = 1.0
        feats[:nd, 5] = flags.channels["horizontal"]
        feats[:nd, 6] = flags.channels["vertical"]
        feats[:nd, 7] = flags.channels["number"]
        feats[nd:, 7] = flags.meta
    else:  # pragma: no cover
        raise AssertionError(kind)

    return GraphObservation(kind=kind, width=w, height=h, node_features=feats,
                            decision_mask=decision_mask.copy(), edges=edges,
                            edge_features=edge_features,
                            action_count=NUM_ACTIONS[kind])


def connected_component_from_source(state: PuzzleState) -> np.ndarray:
    """Net only: cells linked to the source via mutually-facing connectors."""
    if state.kind is not PuzzleKind.NET:
        raise ValueError("connected_component_from_source requires a Net state")
    return net_connected(state.instance, state.values)
