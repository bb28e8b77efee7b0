"""Shared identifiers, grid geometry, canonical state sequencing and the instance text format.

Every other module builds on the types here: the six puzzle kinds, grid
sizes, the canonical flattening of a board into a value sequence, stable
64-bit digests, and a line-oriented serialization for puzzle instances.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

FORMAT_MAGIC = "gpi1"  # instance record format version tag


class PuzzleKind(Enum):
    TENTS = "tents"
    LIGHTUP = "lightup"
    MOSAIC = "mosaic"
    LOOPY = "loopy"
    NET = "net"
    UNRULY = "unruly"

    @classmethod
    def from_name(cls, name: str) -> "PuzzleKind":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown puzzle kind: {name!r}") from None


ALL_KINDS = tuple(PuzzleKind)

# Number of persistent states m a cell can take, per kind.
NUM_CELL_STATES = {
    PuzzleKind.TENTS: 4,    # empty, grass, tent, tree
    PuzzleKind.LIGHTUP: 2,  # no bulb, bulb
    PuzzleKind.MOSAIC: 3,   # unmarked, marked (black), blank (white)
    PuzzleKind.LOOPY: 3,    # undecided, no-line, line
    PuzzleKind.NET: 4,      # orientation index (modulo tile symmetry)
    PuzzleKind.UNRULY: 3,   # empty, white, black
}

# Size of the per-node action table, per kind. Constant in board size.
NUM_ACTIONS = {
    PuzzleKind.TENTS: 4,
    PuzzleKind.LIGHTUP: 3,
    PuzzleKind.MOSAIC: 4,
    PuzzleKind.LOOPY: 4,
    PuzzleKind.NET: 4,
    PuzzleKind.UNRULY: 3,
}

# Human-readable action names, index-aligned with the action ids.
ACTION_NAMES = {
    PuzzleKind.NET: ("rotate90", "rotate180", "rotate270", "nothing"),
    PuzzleKind.LIGHTUP: ("place_bulb", "empty_cell", "nothing"),
    PuzzleKind.LOOPY: ("mark_line", "unmark_line", "empty_line", "nothing"),
    PuzzleKind.TENTS: ("place_tent", "place_grass", "empty_cell", "nothing"),
    PuzzleKind.MOSAIC: ("mark_cell", "unmark_cell", "empty_cell", "nothing"),
    PuzzleKind.UNRULY: ("turn_white", "turn_black", "nothing"),
}

# Tents cell values
TENTS_EMPTY, TENTS_GRASS, TENTS_TENT, TENTS_TREE = 0, 1, 2, 3
# Lightup cell values
LIGHTUP_EMPTY, LIGHTUP_BULB = 0, 1
# Mosaic cell values
MOSAIC_UNMARKED, MOSAIC_BLACK, MOSAIC_WHITE = 0, 1, 2
# Loopy edge values
LOOPY_UNDECIDED, LOOPY_NOLINE, LOOPY_LINE = 0, 1, 2
# Unruly cell values
UNRULY_EMPTY, UNRULY_WHITE, UNRULY_BLACK = 0, 1, 2

# Net connector bits, clockwise from north.
NET_N, NET_E, NET_S, NET_W = 1, 2, 4, 8


def net_rotate_mask(mask: int, quarter_turns: int) -> int:
    """Rotate a 4-bit connector mask clockwise by quarter_turns * 90 degrees."""
    k = quarter_turns % 4
    return ((mask << k) | (mask >> (4 - k))) & 0xF if k else mask


def net_mask_period(mask: int) -> int:
    """Rotational symmetry period of a connector mask (1, 2 or 4)."""
    if mask == 0xF:
        return 1
    if net_rotate_mask(mask, 2) == mask:
        return 2
    return 4


@dataclass(frozen=True)
class GridSpec:
    """Board dimensions in cells. Unruly boards must be even-sided."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 2 or self.height < 2:
            raise ValueError(f"grid must be at least 2x2, got {self.width}x{self.height}")

    def validate_for(self, kind: PuzzleKind) -> None:
        if kind is PuzzleKind.UNRULY and (self.width % 2 or self.height % 2):
            raise ValueError(
                f"unruly needs even width and height, got {self.width}x{self.height}"
            )

    @property
    def area(self) -> int:
        return self.width * self.height

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        try:
            w, h = text.lower().split("x")
            return cls(int(w), int(h))
        except (ValueError, TypeError):
            raise ValueError(f"bad size {text!r}, expected e.g. 5x5") from None

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"


def decision_count(kind: PuzzleKind, width: int, height: int) -> int:
    """Number of decision cells (length of the canonical sequence)."""
    if kind is PuzzleKind.LOOPY:
        # grid-edges: one node per edge of the game grid
        return 2 * width * height + width + height
    return width * height


def meta_count(kind: PuzzleKind, width: int, height: int) -> int:
    if kind is PuzzleKind.LOOPY:
        return width * height            # one meta node per face
    if kind in (PuzzleKind.TENTS, PuzzleKind.UNRULY):
        return width + height            # row and column constraint nodes
    return 0


def loopy_h_index(x: int, y: int, width: int) -> int:
    """Flat index of the horizontal grid-edge from vertex (x,y) to (x+1,y)."""
    return y * width + x


def loopy_v_index(x: int, y: int, width: int, height: int) -> int:
    """Flat index of the vertical grid-edge from vertex (x,y) to (x,y+1)."""
    return width * (height + 1) + y * (width + 1) + x


def canonical_sequence(state) -> np.ndarray:
    """Canonical flattening of all decision-cell values, row-major.

    For Loopy, all horizontal grid-edges come first (row-major over edge
    rows), then all vertical grid-edges (row-major). Meta nodes are not
    part of the sequence.
    """
    return np.asarray(state.values, dtype=np.int8).copy()


def _digest_bytes(parts: list[bytes]) -> int:
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update(p)
    return int.from_bytes(h.digest(), "little")


def state_digest(state) -> int:
    """Stable 64-bit digest of a board state. Equal states hash equal.

    Unsalted (BLAKE2b), so digests are stable across processes and runs.
    """
    inst = state.instance
    return _digest_bytes([
        inst.kind.value.encode(),
        np.array([inst.width, inst.height], dtype=np.int32).tobytes(),
        np.asarray(state.values, dtype=np.int8).tobytes(),
    ])


class ParseError(ValueError):
    """Raised for malformed instance records; carries field name and byte offset."""

    def __init__(self, message: str, field: str, offset: int):
        super().__init__(f"{message} (field {field!r}, byte offset {offset})")
        self.field = field
        self.offset = offset


@dataclass(frozen=True, eq=False)
class PuzzleInstance:
    """An immutable generated puzzle: clue layout plus its unique solution.

    Kind-specific layout fields are None when unused:
      trees      Tents tree mask, shape (h, w) bool
      row_clues  Tents per-row tent counts, shape (h,)
      col_clues  Tents per-column tent counts, shape (w,)
      black      Lightup black-square mask, shape (h, w) bool
      clues      Lightup/Mosaic/Loopy clue grid, shape (h, w) int8, -1 = none
                 (Lightup: clue on black squares; Loopy: clue per face)
      tiles      Net connector masks as presented at reset, shape (h, w) uint8
      source     Net power-source cell (x, y)
      givens     Unruly fixed cells, shape (h, w) int8, -1 = free
    """

    kind: PuzzleKind
    width: int
    height: int
    seed: int
    solution: np.ndarray
    trees: np.ndarray | None = None
    row_clues: np.ndarray | None = None
    col_clues: np.ndarray | None = None
    black: np.ndarray | None = None
    clues: np.ndarray | None = None
    tiles: np.ndarray | None = None
    source: tuple[int, int] | None = None
    givens: np.ndarray | None = None

    def __post_init__(self):
        GridSpec(self.width, self.height).validate_for(self.kind)
        n = decision_count(self.kind, self.width, self.height)
        if len(self.solution) != n:
            raise ValueError(f"solution length {len(self.solution)} != {n}")

    @property
    def size(self) -> GridSpec:
        return GridSpec(self.width, self.height)

    @property
    def num_decision(self) -> int:
        return decision_count(self.kind, self.width, self.height)

    @property
    def num_meta(self) -> int:
        return meta_count(self.kind, self.width, self.height)

    def digest(self) -> int:
        """64-bit digest of the clue layout (identity of the presented puzzle).

        Excludes seed and solution, so two generations of the same layout
        collide -- this is what distinct-configuration counting counts.
        """
        parts = [self.kind.value.encode(),
                 np.array([self.width, self.height], dtype=np.int32).tobytes()]
        for arr in (self.trees, self.row_clues, self.col_clues, self.black,
                    self.clues, self.tiles, self.givens):
            if arr is not None:
                parts.append(np.ascontiguousarray(arr).tobytes())
        if self.source is not None:
            parts.append(np.array(self.source, dtype=np.int32).tobytes())
        return _digest_bytes(parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuzzleInstance):
            return NotImplemented
        if (self.kind, self.width, self.height, self.seed, self.source) != (
                other.kind, other.width, other.height, other.seed, other.source):
            return False

        def same(a, b):
            if a is None or b is None:
                return a is None and b is None
            return np.array_equal(a, b)

        return all(same(getattr(self, f), getattr(other, f))
                   for f in ("solution", "trees", "row_clues", "col_clues",
                             "black", "clues", "tiles", "givens"))

    def __hash__(self):
        return hash((self.kind, self.width, self.height, self.seed, self.digest()))


# --- instance text format -------------------------------------------------
#
# One instance per line:
#   gpi1 kind=<name> w=<int> h=<int> seed=<int> <kind fields> solution=<digits>
#
# Kind fields (grids are row-major character strings of length w*h):
#   tents:   trees=<.T>  rows=<csv ints>  cols=<csv ints>
#   lightup: cells=<. open | # black | 0-4 numbered black>
#   mosaic:  clues=<. or 0-9>
#   loopy:   clues=<. or 0-4>         (per face)
#   net:     tiles=<hex digit per cell>  source=<x>,<y>
#   unruly:  givens=<. w b>


def _grid_to_str(arr: np.ndarray, mapper) -> str:
    return "".join(mapper(int(v)) for v in np.asarray(arr).ravel())


def serialize_instance(instance: PuzzleInstance) -> str:
    """Serialize an instance to a single text record (no trailing newline)."""
    k = instance.kind
    fields = [FORMAT_MAGIC, f"kind={k.value}", f"w={instance.width}",
              f"h={instance.height}", f"seed={instance.seed}"]
    if k is PuzzleKind.TENTS:
        fields.append("trees=" + _grid_to_str(instance.trees, lambda v: "T" if v else "."))
        fields.append("rows=" + ",".join(str(int(c)) for c in instance.row_clues))
        fields.append("cols=" + ",".join(str(int(c)) for c in instance.col_clues))
    elif k is PuzzleKind.LIGHTUP:
        cells = []
        for b, c in zip(instance.black.ravel(), instance.clues.ravel()):
            cells.append(("#" if c < 0 else str(int(c))) if b else ".")
        fields.append("cells=" + "".join(cells))
    elif k in (PuzzleKind.MOSAIC, PuzzleKind.LOOPY):
        fields.append("clues=" + _grid_to_str(instance.clues,
                                              lambda v: "." if v < 0 else str(v)))
    elif k is PuzzleKind.NET:
        fields.append("tiles=" + _grid_to_str(instance.tiles, lambda v: format(v, "x")))
        fields.append(f"source={instance.source[0]},{instance.source[1]}")
    elif k is PuzzleKind.UNRULY:
        fields.append("givens=" + _grid_to_str(
            instance.givens, lambda v: "." if v < 0 else ("w" if v == UNRULY_WHITE else "b")))
    fields.append("solution=" + "".join(str(int(v)) for v in instance.solution))
    return " ".join(fields)


def _parse_int(text: str, offset: int, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected integer, got {text!r}", name, offset) from None


def _parse_grid(text: str, name: str, offset: int, w: int, h: int, mapper) -> np.ndarray:
    if len(text) != w * h:
        raise ParseError(f"grid has {len(text)} cells, expected {w * h}", name, offset)
    out = np.empty(w * h, dtype=np.int8)
    for i, ch in enumerate(text):
        v = mapper(ch)
        if v is None:
            raise ParseError(f"bad character {ch!r}", name, offset + len(name) + 1 + i)
        out[i] = v
    return out.reshape(h, w)


def parse_instance(record: str) -> PuzzleInstance:
    """Parse one instance record. Raises ParseError naming field and byte offset."""
    tokens: list[tuple[str, int]] = []
    pos = 0
    for tok in record.rstrip("\n").split(" "):
        if tok:
            tokens.append((tok, pos))
        pos += len(tok) + 1
    if not tokens or tokens[0][0] != FORMAT_MAGIC:
        raise ParseError(f"missing {FORMAT_MAGIC!r} magic", "format_version", 0)
    kv: dict[str, tuple[str, int]] = {}
    for tok, off in tokens[1:]:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", tok, off)
        key, val = tok.split("=", 1)
        kv[key] = (val, off)

    def need(name: str) -> tuple[str, int]:
        if name not in kv:
            raise ParseError("missing field", name, len(record))
        return kv[name]

    kind_s, kind_off = need("kind")
    try:
        kind = PuzzleKind.from_name(kind_s)
    except ValueError:
        raise ParseError("unknown puzzle kind", "kind", kind_off) from None
    w = _parse_int(*need("w"), name="w")
    h = _parse_int(*need("h"), name="h")
    seed = _parse_int(*need("seed"), name="seed")
    if w < 2 or h < 2:
        raise ParseError(f"bad size {w}x{h}", "w", kv["w"][1])

    kwargs: dict = {}
    if kind is PuzzleKind.TENTS:
        trees_s, off = need("trees")
        kwargs["trees"] = _parse_grid(
            trees_s, "trees", off, w, h,
            lambda ch: {".": 0, "T": 1}.get(ch)).astype(bool)
        rows_s, off = need("rows")
        try:
            kwargs["row_clues"] = np.array([int(t) for t in rows_s.split(",")], dtype=np.int32)
        except ValueError:
            raise ParseError("bad row clue list", "rows", off) from None
        cols_s, off = need("cols")
        try:
            kwargs["col_clues"] = np.array([int(t) for t in cols_s.split(",")], dtype=np.int32)
        except ValueError:
            raise ParseError("bad col clue list", "cols", off) from None
        if len(kwargs["row_clues"]) != h or len(kwargs["col_clues"]) != w:
            raise ParseError("clue list length mismatch", "rows", off)
    elif kind is PuzzleKind.LIGHTUP:
        cells_s, off = need("cells")
        grid = _parse_grid(cells_s, "cells", off, w, h,
                           lambda ch: {".": -2, "#": -1}.get(ch, int(ch) if ch.isdigit() and ch <= "4" else None))
        kwargs["black"] = grid != -2
        clues = grid.copy()
        clues[grid == -2] = -1
        kwargs["clues"] = clues
    elif kind in (PuzzleKind.MOSAIC, PuzzleKind.LOOPY):
        clues_s, off = need("clues")
        top = "9" if kind is PuzzleKind.MOSAIC else "4"
        kwargs["clues"] = _parse_grid(
            clues_s, "clues", off, w, h,
            lambda ch: -1 if ch == "." else (int(ch) if ch.isdigit() and ch <= top else None))
    elif kind is PuzzleKind.NET:
        tiles_s, off = need("tiles")
        kwargs["tiles"] = _parse_grid(
            tiles_s, "tiles", off, w, h,
            lambda ch: int(ch, 16) if ch in "0123456789abcdef" else None).astype(np.uint8)
        src_s, off = need("source")
        try:
            sx, sy = (int(t) for t in src_s.split(","))
        except ValueError:
            raise ParseError("bad source coordinates", "source", off) from None
        if not (0 <= sx < w and 0 <= sy < h):
            raise ParseError("source out of bounds", "source", off)
        kwargs["source"] = (sx, sy)
    elif kind is PuzzleKind.UNRULY:
        givens_s, off = need("givens")
        kwargs["givens"] = _parse_grid(
            givens_s, "givens", off, w, h,
            lambda ch: {".": -1, "w": UNRULY_WHITE, "b": UNRULY_BLACK}.get(ch))

    sol_s, sol_off = need("solution")
    n = decision_count(kind, w, h)
    if len(sol_s) != n:
        raise ParseError(f"solution has {len(sol_s)} values, expected {n}", "solution", sol_off)
    m = NUM_CELL_STATES[kind]
    solution = np.empty(n, dtype=np.int8)
    for i, ch in enumerate(sol_s):
        if not ch.isdigit() or int(ch) >= m:
            raise ParseError(f"solution value {ch!r} out of range", "solution",
                             sol_off + len("solution=") + i)
        solution[i] = int(ch)

    try:
        return PuzzleInstance(kind=kind, width=w, height=h, seed=seed,
                              solution=solution, **kwargs)
    except ValueError as exc:
        raise ParseError(str(exc), "record", 0) from None


def write_corpus(path, instances) -> None:
    """Write instances to a corpus file, one record per line, UTF-8."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for inst in instances:
            fh.write(serialize_instance(inst))
            fh.write("\n")


def read_corpus(path) -> list[PuzzleInstance]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(parse_instance(line))
    return out
