"""ASCII rendering of puzzle states with violation markers."""
from __future__ import annotations

from .core import (
    LIGHTUP_BULB, LOOPY_LINE, LOOPY_NOLINE, LOOPY_UNDECIDED, NET_E, NET_N,
    NET_S, NET_W, PuzzleKind, TENTS_EMPTY, TENTS_GRASS, TENTS_TENT,
    TENTS_TREE, UNRULY_BLACK, UNRULY_WHITE,
)
from .rules import PuzzleState, lightup_lit, loopy_grids, net_connected, net_shapes

_NET_GLYPHS = {
    NET_N: "╵", NET_E: "╶", NET_S: "╷", NET_W: "╴",
    NET_N | NET_E: "└", NET_N | NET_S: "│", NET_E | NET_S: "┌",
    NET_N | NET_W: "┘", NET_E | NET_W: "─", NET_S | NET_W: "┐",
    NET_N | NET_E | NET_S: "├", NET_N | NET_E | NET_W: "┴",
    NET_N | NET_S | NET_W: "┤", NET_E | NET_S | NET_W: "┬",
    NET_N | NET_E | NET_S | NET_W: "┼",
}


def render(state: PuzzleState) -> str:
    """Board as text; '!' marks violated nodes, clue markers per kind."""
    kind = state.kind
    if kind is PuzzleKind.TENTS:
        return _render_tents(state)
    if kind is PuzzleKind.LIGHTUP:
        return _render_lightup(state)
    if kind is PuzzleKind.MOSAIC:
        return _render_mosaic(state)
    if kind is PuzzleKind.LOOPY:
        return _render_loopy(state)
    if kind is PuzzleKind.NET:
        return _render_net(state)
    if kind is PuzzleKind.UNRULY:
        return _render_unruly(state)
    raise AssertionError(kind)


def _render_tents(state: PuzzleState) -> str:
    inst = state.instance
    h, w = inst.height, inst.width
    grid = state.values.reshape(h, w)
    flags = state.flags()
    cell_flags = flags.cell.reshape(h, w)
    chars = {TENTS_EMPTY: ".", TENTS_GRASS: ",", TENTS_TENT: "A", TENTS_TREE: "T"}
    row_bad = flags.meta[:h]
    col_bad = flags.meta[h:]
    header = "    " + " ".join(
        f"{int(c)}{'!' if col_bad[x] else ' '}" for x, c in enumerate(inst.col_clues))
    lines = [header.rstrip()]
    for y in range(h):
        mark = "!" if row_bad[y] else " "
        cells = " ".join(
            chars[int(grid[y, x])] + ("!" if cell_flags[y, x] else " ")
            for x in range(w))
        lines.append(f"{int(inst.row_clues[y])}{mark}  " + cells.rstrip())
    return "\n".join(lines)


def _render_lightup(state: PuzzleState) -> str:
    inst = state.instance
    h, w = inst.height, inst.width
    grid = state.values.reshape(h, w)
    cell_flags = state.flags().cell.reshape(h, w)
    lit = lightup_lit(inst, state.values).reshape(h, w)
    lines = []
    for y in range(h):
        row = []
        for x in range(w):
            if inst.black[y, x]:
                c = str(int(inst.clues[y, x])) if inst.clues[y, x] >= 0 else "#"
            elif grid[y, x] == LIGHTUP_BULB:
                c = "B"
            else:
                c = "*" if lit[y, x] else "."
            row.append(c + ("!" if cell_flags[y, x] else " "))
        lines.append(" ".join(row).rstrip())
    return "\n".join(lines)


def _render_mosaic(state: PuzzleState) -> str:
    inst = state.instance
    h, w = inst.height, inst.width
    grid = state.values.reshape(h, w)
    cell_flags = state.flags().cell.reshape(h, w)
    state_chars = {0: ".", 1: "#", 2: "o"}
    lines = []
    for y in range(h):
        row = []
        for x in range(w):
            clue = int(inst.clues[y, x])
            row.append(state_chars[int(grid[y, x])]
                       + (str(clue) if clue >= 0 else " ")
                       + ("!" if cell_flags[y, x] else " "))
        lines.append(" ".join(row).rstrip())
    return "\n".join(lines)


def _render_loopy(state: PuzzleState) -> str:
    inst = state.instance
    h, w = inst.height, inst.width
    H, V = loopy_grids(inst, state.values)
    flags = state.flags()
    nh = w * (h + 1)
    hflag = flags.cell[:nh].reshape(h + 1, w)
    vflag = flags.cell[nh:].reshape(h, w + 1)
    face_flag = flags.meta.reshape(h, w)
    hchars = {LOOPY_UNDECIDED: " · ", LOOPY_NOLINE: " x ", LOOPY_LINE: "---"}
    vchars = {LOOPY_UNDECIDED: "·", LOOPY_NOLINE: "x", LOOPY_LINE: "|"}
    lines = []
    for y in range(h + 1):
        edge_row = "+" + "+".join(
            ("===" if hflag[y, x] else hchars[int(H[y, x])]) for x in range(w)) + "+"
        lines.append(edge_row)
        if y < h:
            parts = []
            for x in range(w + 1):
                parts.append("#" if vflag[y, x] else vchars[int(V[y, x])])
                if x < w:
                    clue = int(inst.clues[y, x])
                    face = str(clue) if clue >= 0 else " "
                    face += "!" if face_flag[y, x] else " "
                    parts.append(f" {face}")
            lines.append("".join(parts).rstrip())
    return "\n".join(lines)


def _render_net(state: PuzzleState) -> str:
    inst = state.instance
    h, w = inst.height, inst.width
    shapes = net_shapes(inst, state.values)
    reach = net_connected(inst, state.values)
    sx, sy = inst.source
    board = ["".join(_NET_GLYPHS[int(shapes[y, x])] for x in range(w))
             for y in range(h)]
    status = []
    for y in range(h):
        row = "".join("S" if (x, y) == (sx, sy) else ("o" if reach[y, x] else ".")
                      for x in range(w))
        status.append(row)
    lines = [b + "   " + s for b, s in zip(board, status)]
    lines.append("(left: tiles, right: connected-to-source map, S = source)")
    return "\n".join(lines)


def _render_unruly(state: PuzzleState) -> str:
    inst = state.instance
    h, w = inst.height, inst.width
    grid = state.values.reshape(h, w)
    cell_flags = state.flags().cell.reshape(h, w)
    lines = []
    for y in range(h):
        row = []
        for x in range(w):
            v = int(grid[y, x])
            given = inst.givens[y, x] >= 0
            c = {0: ".", UNRULY_WHITE: "w", UNRULY_BLACK: "b"}[v]
            if given:
                c = c.upper()
            row.append(c + ("!" if cell_flags[y, x] else " "))
        lines.append(" ".join(row).rstrip())
    return "\n".join(lines)
