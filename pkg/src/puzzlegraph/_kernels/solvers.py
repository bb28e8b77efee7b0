"""Exact backtracking solvers for the six puzzles (hot kernels).

Written in Cython pure-Python mode: compiled by setup.py into an extension
for speed, but the same file runs unmodified under plain CPython as the
fallback lane. Keep the code inside the subset that behaves identically in
both lanes: no negative indexing, non-negative division operands only, and
every assign path finishes its bookkeeping before a failure return so the
undo paths stay symmetric.

All solvers share the contract:
  - deterministic exploration: cells in canonical order, values ascending
    (generator-internal entry points may override the value order);
  - up to `cap` solutions written row-wise into `out` (int8, cap*n);
  - returns (solutions_found, branch_nodes).
"""

try:
    import cython
except ImportError:  # pragma: no cover - minimal shim for cython-less installs
    class _Type:
        def __getitem__(self, item):
            return None

    class _Shim:
        compiled = False
        char = uchar = int = long = Py_ssize_t = _Type()

        @staticmethod
        def cclass(cls):
            return cls

        @staticmethod
        def cfunc(f):
            return f

        @staticmethod
        def ccall(f):
            return f

        @staticmethod
        def exceptval(*a, **k):
            return lambda f: f

    cython = _Shim()

COMPILED = cython.compiled

# Net connector bits, clockwise from north.
_N, _E, _S, _W = 1, 2, 4, 8


@cython.cfunc
@cython.exceptval(check=False)
def _rot(mask: cython.int, k: cython.int) -> cython.int:
    return ((mask << k) | (mask >> (4 - k))) & 0xF if k != 0 else mask


# --------------------------------------------------------------------------
# Net: orientation per tile; a solution must connect every tile to the
# source. Tile multisets derived from spanning trees have exactly 2(n-1)
# connector ends, so every end must be matched pairwise in any solution;
# the search enforces per-edge end matching and checks connectivity at the
# leaves. run() returns (-1, 0) if the end-count precondition fails.
# --------------------------------------------------------------------------

@cython.cclass
class _NetSolver:
    tiles: cython.uchar[:]
    cur: cython.uchar[:]
    vals: cython.char[:]
    period: cython.char[:]
    out: cython.char[:]
    stack: cython.int[:]
    seen: cython.char[:]
    w: cython.int
    h: cython.int
    n: cython.int
    source: cython.int
    cap: cython.int
    nsol: cython.int
    nodes: cython.int

    def __init__(self, tiles, period, source, w, h, cap, out, cur, vals, stack, seen):
        self.tiles = tiles
        self.period = period
        self.cur = cur
        self.vals = vals
        self.out = out
        self.stack = stack
        self.seen = seen
        self.w = w
        self.h = h
        self.n = w * h
        self.source = source
        self.cap = cap
        self.nsol = 0
        self.nodes = 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _connected(self) -> cython.int:
        i: cython.int
        for i in range(self.n):
            self.seen[i] = 0
        self.stack[0] = self.source
        self.seen[self.source] = 1
        top: cython.int = 1
        count: cython.int = 1
        w: cython.int = self.w
        while top > 0:
            top -= 1
            i = self.stack[top]
            x: cython.int = i % w
            y: cython.int = i // w
            m: cython.int = self.cur[i]
            if (m & _E) != 0 and x + 1 < w and (self.cur[i + 1] & _W) != 0 and self.seen[i + 1] == 0:
                self.seen[i + 1] = 1
                self.stack[top] = i + 1
                top += 1
                count += 1
            if (m & _W) != 0 and x > 0 and (self.cur[i - 1] & _E) != 0 and self.seen[i - 1] == 0:
                self.seen[i - 1] = 1
                self.stack[top] = i - 1
                top += 1
                count += 1
            if (m & _S) != 0 and y + 1 < self.h and (self.cur[i + w] & _N) != 0 and self.seen[i + w] == 0:
                self.seen[i + w] = 1
                self.stack[top] = i + w
                top += 1
                count += 1
            if (m & _N) != 0 and y > 0 and (self.cur[i - w] & _S) != 0 and self.seen[i - w] == 0:
                self.seen[i - w] = 1
                self.stack[top] = i - w
                top += 1
                count += 1
        return 1 if count == self.n else 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _search(self, idx: cython.int) -> cython.int:
        if idx == self.n:
            if self._connected() != 0:
                base: cython.int = self.nsol * self.n
                i: cython.int
                for i in range(self.n):
                    self.out[base + i] = self.vals[i]
                self.nsol += 1
                if self.nsol >= self.cap:
                    return 1
            return 0
        w: cython.int = self.w
        x: cython.int = idx % w
        y: cython.int = idx // w
        o: cython.int
        for o in range(self.period[idx]):
            m: cython.int = _rot(self.tiles[idx], o)
            if x == 0:
                if (m & _W) != 0:
                    continue
            elif ((m >> 3) & 1) != ((self.cur[idx - 1] >> 1) & 1):
                continue
            if x == w - 1 and (m & _E) != 0:
                continue
            if y == 0:
                if (m & _N) != 0:
                    continue
            elif (m & 1) != ((self.cur[idx - w] >> 2) & 1):
                continue
            if y == self.h - 1 and (m & _S) != 0:
                continue
            self.vals[idx] = o
            self.cur[idx] = m
            self.nodes += 1
            if self._search(idx + 1) != 0:
                return 1
        return 0

    def run(self):
        ends: cython.int = 0
        i: cython.int
        m: cython.int
        for i in range(self.n):
            m = self.tiles[i]
            ends += (m & 1) + ((m >> 1) & 1) + ((m >> 2) & 1) + ((m >> 3) & 1)
        if ends != 2 * (self.n - 1):
            return -1, 0
        self._search(0)
        return self.nsol, self.nodes


def solve_net(tiles, period, source, w, h, cap, out, cur, vals, stack, seen):
    s = _NetSolver(tiles, period, source, w, h, cap, out, cur, vals, stack, seen)
    return s.run()


# --------------------------------------------------------------------------
# Loopy (slitherlink): edge values in {1 no-line, 2 line}. Propagation:
# vertex degrees must end in {0, 2}; face clue counts are bounded both ways
# with forcing when tight; union-find over line edges tracks components so a
# closing cycle is only accepted as the single final loop.
# --------------------------------------------------------------------------

@cython.cclass
class _LoopySolver:
    clo: cython.char[:]
    chi: cython.char[:]
    status: cython.char[:]
    ev_a: cython.int[:]
    ev_b: cython.int[:]
    ef_a: cython.int[:]
    ef_b: cython.int[:]
    vptr: cython.int[:]
    vedg: cython.int[:]
    fedg: cython.int[:]
    vl: cython.char[:]
    vu: cython.char[:]
    fl: cython.char[:]
    fu: cython.char[:]
    parent: cython.int[:]
    size: cython.int[:]
    ustack: cython.int[:]
    trail: cython.int[:]
    queue: cython.int[:]
    out: cython.char[:]
    ne: cython.int
    nv: cython.int
    nf: cython.int
    cap: cython.int
    nsol: cython.int
    nodes: cython.long
    budget: cython.long
    tlen: cython.int
    usp: cython.int
    ncomp: cython.int
    closed: cython.int
    qhead: cython.int
    qtail: cython.int

    def __init__(self, clo, chi, ne, nv, nf, cap, budget, out, ev_a, ev_b,
                 ef_a, ef_b, vptr, vedg, fedg, status, vl, vu, fl, fu,
                 parent, size, ustack, trail, queue):
        self.clo = clo
        self.chi = chi
        self.budget = budget
        self.ne = ne
        self.nv = nv
        self.nf = nf
        self.cap = cap
        self.out = out
        self.ev_a = ev_a
        self.ev_b = ev_b
        self.ef_a = ef_a
        self.ef_b = ef_b
        self.vptr = vptr
        self.vedg = vedg
        self.fedg = fedg
        self.status = status
        self.vl = vl
        self.vu = vu
        self.fl = fl
        self.fu = fu
        self.parent = parent
        self.size = size
        self.ustack = ustack
        self.trail = trail
        self.queue = queue
        self.nsol = 0
        self.nodes = 0
        self.tlen = 0
        self.usp = 0
        self.ncomp = 0
        self.closed = 0
        i: cython.int
        for i in range(ne):
            self.status[i] = 0
        for i in range(nv):
            self.vl[i] = 0
            self.vu[i] = vptr[i + 1] - vptr[i]
            self.parent[i] = i
            self.size[i] = 1
        for i in range(nf):
            self.fl[i] = 0
            self.fu[i] = 4

    @cython.cfunc
    @cython.exceptval(check=False)
    def _find(self, v: cython.int) -> cython.int:
        while self.parent[v] != v:
            v = self.parent[v]
        return v

    @cython.cfunc
    @cython.exceptval(check=False)
    def _push(self, e: cython.int, v: cython.int) -> cython.int:
        self.queue[self.qtail] = e * 4 + v
        self.qtail += 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _vertex_rule(self, x: cython.int) -> cython.int:
        lines: cython.int = self.vl[x]
        und: cython.int = self.vu[x]
        if lines > 2:
            return 0
        k: cython.int
        e: cython.int
        if lines == 2:
            if und > 0:
                for k in range(self.vptr[x], self.vptr[x + 1]):
                    e = self.vedg[k]
                    if self.status[e] == 0:
                        self._push(e, 1)
        elif lines == 1:
            if und == 0:
                return 0
            if und == 1:
                for k in range(self.vptr[x], self.vptr[x + 1]):
                    e = self.vedg[k]
                    if self.status[e] == 0:
                        self._push(e, 2)
        else:
            if und == 1:
                for k in range(self.vptr[x], self.vptr[x + 1]):
                    e = self.vedg[k]
                    if self.status[e] == 0:
                        self._push(e, 1)
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _face_rule(self, f: cython.int) -> cython.int:
        lo: cython.int = self.clo[f]
        hi: cython.int = self.chi[f]
        lines: cython.int = self.fl[f]
        und: cython.int = self.fu[f]
        if lines > hi or lines + und < lo:
            return 0
        k: cython.int
        e: cython.int
        if und > 0:
            if lines == hi:
                for k in range(4):
                    e = self.fedg[f * 4 + k]
                    if self.status[e] == 0:
                        self._push(e, 1)
            elif lines + und == lo:
                for k in range(4):
                    e = self.fedg[f * 4 + k]
                    if self.status[e] == 0:
                        self._push(e, 2)
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _assign(self, e: cython.int, v: cython.int) -> cython.int:
        # all bookkeeping happens before any failure return so that the
        # trail-based undo is always symmetric
        va: cython.int = self.ev_a[e]
        vb: cython.int = self.ev_b[e]
        self.status[e] = v
        self.trail[self.tlen] = e
        self.tlen += 1
        la: cython.int = self.vl[va]
        lb: cython.int = self.vl[vb]
        self.vu[va] -= 1
        self.vu[vb] -= 1
        f: cython.int
        f = self.ef_a[e]
        if f >= 0:
            self.fu[f] -= 1
        f = self.ef_b[e]
        if f >= 0:
            self.fu[f] -= 1
        if v == 2:
            self.vl[va] = la + 1
            self.vl[vb] = lb + 1
            f = self.ef_a[e]
            if f >= 0:
                self.fl[f] += 1
            f = self.ef_b[e]
            if f >= 0:
                self.fl[f] += 1
            ra: cython.int = self._find(va)
            rb: cython.int = self._find(vb)
            was_cycle: cython.int = 0
            if ra == rb:
                was_cycle = 1
            else:
                if la == 0 and lb == 0:
                    self.ncomp += 1
                elif la > 0 and lb > 0:
                    self.ncomp -= 1
                if self.size[ra] < self.size[rb]:
                    ra, rb = rb, ra
                self.parent[rb] = ra
                self.size[ra] += self.size[rb]
                self.ustack[self.usp] = rb
                self.ustack[self.usp + 1] = ra
                self.usp += 2
            if self.closed != 0:
                return 0  # no lines may follow a closed loop
            if was_cycle != 0:
                if self.ncomp != 1:
                    return 0
                self.closed = 1
        if self._vertex_rule(va) == 0 or self._vertex_rule(vb) == 0:
            return 0
        f = self.ef_a[e]
        if f >= 0 and self._face_rule(f) == 0:
            return 0
        f = self.ef_b[e]
        if f >= 0 and self._face_rule(f) == 0:
            return 0
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _drain(self) -> cython.int:
        while self.qhead < self.qtail:
            item: cython.int = self.queue[self.qhead]
            self.qhead += 1
            e: cython.int = item // 4
            v: cython.int = item % 4
            s: cython.int = self.status[e]
            if s == v:
                continue
            if s != 0:
                return 0
            if self._assign(e, v) == 0:
                return 0
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _undo(self, t0: cython.int, u0: cython.int, nc: cython.int, cl: cython.int) -> cython.int:
        e: cython.int
        v: cython.int
        f: cython.int
        while self.tlen > t0:
            self.tlen -= 1
            e = self.trail[self.tlen]
            v = self.status[e]
            self.status[e] = 0
            self.vu[self.ev_a[e]] += 1
            self.vu[self.ev_b[e]] += 1
            f = self.ef_a[e]
            if f >= 0:
                self.fu[f] += 1
            f = self.ef_b[e]
            if f >= 0:
                self.fu[f] += 1
            if v == 2:
                self.vl[self.ev_a[e]] -= 1
                self.vl[self.ev_b[e]] -= 1
                f = self.ef_a[e]
                if f >= 0:
                    self.fl[f] -= 1
                f = self.ef_b[e]
                if f >= 0:
                    self.fl[f] -= 1
        while self.usp > u0:
            self.usp -= 2
            rb: cython.int = self.ustack[self.usp]
            ra: cython.int = self.ustack[self.usp + 1]
            self.size[ra] -= self.size[rb]
            self.parent[rb] = rb
        self.ncomp = nc
        self.closed = cl
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _search(self, ptr: cython.int) -> cython.int:
        while ptr < self.ne and self.status[ptr] != 0:
            ptr += 1
        if ptr == self.ne:
            if self.closed != 0 and self.ncomp == 1:
                base: cython.int = self.nsol * self.ne
                i: cython.int
                for i in range(self.ne):
                    self.out[base + i] = self.status[i]
                self.nsol += 1
                if self.nsol >= self.cap:
                    return 1
            return 0
        v: cython.int
        for v in range(1, 3):
            t0: cython.int = self.tlen
            u0: cython.int = self.usp
            nc: cython.int = self.ncomp
            cl: cython.int = self.closed
            self.nodes += 1
            if self.nodes >= self.budget:
                return 1  # search aborted; caller inspects the node count
            self.qhead = 0
            self.qtail = 0
            self._push(ptr, v)
            if self._drain() != 0:
                if self._search(ptr + 1) != 0:
                    return 1
            self._undo(t0, u0, nc, cl)
        return 0

    def run(self):
        # bootstrap: clue-0 / clue-4 faces and degree-forced edges
        self.qhead = 0
        self.qtail = 0
        f: cython.int
        x: cython.int
        ok: cython.int = 1
        for f in range(self.nf):
            if self._face_rule(f) == 0:
                ok = 0
        for x in range(self.nv):
            if self._vertex_rule(x) == 0:
                ok = 0
        if ok != 0 and self._drain() != 0:
            self._search(0)
        return self.nsol, self.nodes


def solve_loopy(clo, chi, ne, nv, nf, cap, budget, out, ev_a, ev_b, ef_a,
                ef_b, vptr, vedg, fedg, status, vl, vu, fl, fu, parent, size,
                ustack, trail, queue):
    s = _LoopySolver(clo, chi, ne, nv, nf, cap, budget, out, ev_a, ev_b,
                     ef_a, ef_b, vptr, vedg, fedg, status, vl, vu, fl, fu,
                     parent, size, ustack, trail, queue)
    return s.run()


# --------------------------------------------------------------------------
# Mosaic (fill-a-pix): cell values in {1 black, 2 white}; every clue cell
# constrains its clipped 3x3 region. Forcing when a region gets tight.
# --------------------------------------------------------------------------

@cython.cclass
class _MosaicSolver:
    clo: cython.char[:]
    chi: cython.char[:]
    status: cython.char[:]
    b: cython.char[:]
    u: cython.char[:]
    trail: cython.int[:]
    queue: cython.int[:]
    out: cython.char[:]
    w: cython.int
    h: cython.int
    n: cython.int
    cap: cython.int
    nsol: cython.int
    nodes: cython.long
    budget: cython.long
    tlen: cython.int
    qhead: cython.int
    qtail: cython.int

    def __init__(self, clo, chi, w, h, cap, budget, out, status, b, u, trail, queue):
        self.clo = clo
        self.chi = chi
        self.budget = budget
        self.w = w
        self.h = h
        self.n = w * h
        self.cap = cap
        self.out = out
        self.status = status
        self.b = b
        self.u = u
        self.trail = trail
        self.queue = queue
        self.nsol = 0
        self.nodes = 0
        self.tlen = 0
        i: cython.int
        for i in range(self.n):
            self.status[i] = 0
            self.b[i] = 0
        y: cython.int
        x: cython.int
        for y in range(h):
            for x in range(w):
                ry: cython.int = (1 if y > 0 else 0) + (1 if y + 1 < h else 0) + 1
                rx: cython.int = (1 if x > 0 else 0) + (1 if x + 1 < w else 0) + 1
                self.u[y * w + x] = ry * rx

    @cython.cfunc
    @cython.exceptval(check=False)
    def _force_region(self, j: cython.int, v: cython.int) -> cython.int:
        w: cython.int = self.w
        jy: cython.int = j // w
        jx: cython.int = j % w
        y0: cython.int = jy - 1 if jy > 0 else 0
        y1: cython.int = jy + 1 if jy + 1 < self.h else self.h - 1
        x0: cython.int = jx - 1 if jx > 0 else 0
        x1: cython.int = jx + 1 if jx + 1 < w else w - 1
        y: cython.int
        x: cython.int
        for y in range(y0, y1 + 1):
            for x in range(x0, x1 + 1):
                if self.status[y * w + x] == 0:
                    self.queue[self.qtail] = (y * w + x) * 4 + v
                    self.qtail += 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _clue_check(self, j: cython.int) -> cython.int:
        lo: cython.int = self.clo[j]
        hi: cython.int = self.chi[j]
        bj: cython.int = self.b[j]
        uj: cython.int = self.u[j]
        if bj > hi or bj + uj < lo:
            return 0
        if uj > 0:
            if bj == hi:
                self._force_region(j, 2)
            elif bj + uj == lo:
                self._force_region(j, 1)
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _assign(self, i: cython.int, v: cython.int) -> cython.int:
        self.status[i] = v
        self.trail[self.tlen] = i
        self.tlen += 1
        w: cython.int = self.w
        iy: cython.int = i // w
        ix: cython.int = i % w
        y0: cython.int = iy - 1 if iy > 0 else 0
        y1: cython.int = iy + 1 if iy + 1 < self.h else self.h - 1
        x0: cython.int = ix - 1 if ix > 0 else 0
        x1: cython.int = ix + 1 if ix + 1 < w else w - 1
        y: cython.int
        x: cython.int
        j: cython.int
        for y in range(y0, y1 + 1):
            for x in range(x0, x1 + 1):
                j = y * w + x
                self.u[j] -= 1
                if v == 1:
                    self.b[j] += 1
        for y in range(y0, y1 + 1):
            for x in range(x0, x1 + 1):
                if self._clue_check(y * w + x) == 0:
                    return 0
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _drain(self) -> cython.int:
        while self.qhead < self.qtail:
            item: cython.int = self.queue[self.qhead]
            self.qhead += 1
            i: cython.int = item // 4
            v: cython.int = item % 4
            s: cython.int = self.status[i]
            if s == v:
                continue
            if s != 0:
                return 0
            if self._assign(i, v) == 0:
                return 0
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _undo(self, t0: cython.int) -> cython.int:
        w: cython.int = self.w
        while self.tlen > t0:
            self.tlen -= 1
            i: cython.int = self.trail[self.tlen]
            v: cython.int = self.status[i]
            self.status[i] = 0
            iy: cython.int = i // w
            ix: cython.int = i % w
            y0: cython.int = iy - 1 if iy > 0 else 0
            y1: cython.int = iy + 1 if iy + 1 < self.h else self.h - 1
            x0: cython.int = ix - 1 if ix > 0 else 0
            x1: cython.int = ix + 1 if ix + 1 < w else w - 1
            y: cython.int
            x: cython.int
            for y in range(y0, y1 + 1):
                for x in range(x0, x1 + 1):
                    self.u[y * w + x] += 1
                    if v == 1:
                        self.b[y * w + x] -= 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _search(self, ptr: cython.int) -> cython.int:
        while ptr < self.n and self.status[ptr] != 0:
            ptr += 1
        if ptr == self.n:
            base: cython.int = self.nsol * self.n
            i: cython.int
            for i in range(self.n):
                self.out[base + i] = self.status[i]
            self.nsol += 1
            return 1 if self.nsol >= self.cap else 0
        v: cython.int
        for v in range(1, 3):
            t0: cython.int = self.tlen
            self.nodes += 1
            if self.nodes >= self.budget:
                return 1  # search aborted; caller inspects the node count
            self.qhead = 0
            self.qtail = 0
            self.queue[self.qtail] = ptr * 4 + v
            self.qtail += 1
            if self._drain() != 0:
                if self._search(ptr + 1) != 0:
                    return 1
            self._undo(t0)
        return 0

    def run(self):
        self.qhead = 0
        self.qtail = 0
        ok: cython.int = 1
        j: cython.int
        for j in range(self.n):
            if self._clue_check(j) == 0:
                ok = 0
        if ok != 0 and self._drain() != 0:
            self._search(0)
        return self.nsol, self.nodes


def solve_mosaic(clo, chi, w, h, cap, budget, out, status, b, u, trail, queue):
    s = _MosaicSolver(clo, chi, w, h, cap, budget, out, status, b, u, trail, queue)
    return s.run()


# --------------------------------------------------------------------------
# Tents: non-tree cells take {1 grass, 2 tent}. Propagation: a placed tent
# forces grass on its 8-neighborhood; a row/column reaching its clue forces
# grass on the rest (or tents when the free cells exactly cover the
# deficit); a tree with its single tent found forces grass on its other
# orthogonal cells, and a tree down to one candidate forces a tent there.
# --------------------------------------------------------------------------

@cython.cclass
class _TentsSolver:
    trees: cython.char[:]
    status: cython.char[:]
    rowc: cython.int[:]
    colc: cython.int[:]
    row_t: cython.int[:]
    col_t: cython.int[:]
    row_f: cython.int[:]
    col_f: cython.int[:]
    tadj: cython.char[:]
    tund: cython.char[:]
    trail: cython.int[:]
    queue: cython.int[:]
    out: cython.char[:]
    w: cython.int
    h: cython.int
    n: cython.int
    cap: cython.int
    nsol: cython.int
    nodes: cython.long
    budget: cython.long
    tlen: cython.int
    qhead: cython.int
    qtail: cython.int

    def __init__(self, trees, rowc, colc, w, h, cap, budget, out, status,
                 row_t, col_t, row_f, col_f, tadj, tund, trail, queue):
        self.budget = budget
        self.trees = trees
        self.rowc = rowc
        self.colc = colc
        self.w = w
        self.h = h
        self.n = w * h
        self.cap = cap
        self.out = out
        self.status = status
        self.row_t = row_t
        self.col_t = col_t
        self.row_f = row_f
        self.col_f = col_f
        self.tadj = tadj
        self.tund = tund
        self.trail = trail
        self.queue = queue
        self.nsol = 0
        self.nodes = 0
        self.tlen = 0
        self.qhead = 0
        self.qtail = 0
        i: cython.int
        y: cython.int
        x: cython.int
        for i in range(self.n):
            self.status[i] = 0
            self.tadj[i] = 0
            self.tund[i] = 0
        for y in range(h):
            self.row_t[y] = 0
            self.row_f[y] = 0
        for x in range(w):
            self.col_t[x] = 0
            self.col_f[x] = 0
        for y in range(h):
            for x in range(w):
                i = y * w + x
                if self.trees[i] == 0:
                    self.row_f[y] += 1
                    self.col_f[x] += 1
                else:
                    if x > 0 and self.trees[i - 1] == 0:
                        self.tund[i] += 1
                    if x + 1 < w and self.trees[i + 1] == 0:
                        self.tund[i] += 1
                    if y > 0 and self.trees[i - w] == 0:
                        self.tund[i] += 1
                    if y + 1 < h and self.trees[i + w] == 0:
                        self.tund[i] += 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _orth(self, i: cython.int, t: cython.int) -> cython.int:
        w: cython.int = self.w
        y: cython.int = i // w
        x: cython.int = i % w
        if t == 0:
            return i - 1 if x > 0 else -1
        if t == 1:
            return i + 1 if x + 1 < w else -1
        if t == 2:
            return i - w if y > 0 else -1
        return i + w if y + 1 < self.h else -1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _push(self, i: cython.int, v: cython.int) -> cython.int:
        self.queue[self.qtail] = i * 4 + v
        self.qtail += 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _force_row(self, y: cython.int, v: cython.int) -> cython.int:
        w: cython.int = self.w
        k: cython.int
        for k in range(w):
            i: cython.int = y * w + k
            if self.trees[i] == 0 and self.status[i] == 0:
                self._push(i, v)
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _force_col(self, x: cython.int, v: cython.int) -> cython.int:
        w: cython.int = self.w
        k: cython.int
        for k in range(self.h):
            i: cython.int = k * w + x
            if self.trees[i] == 0 and self.status[i] == 0:
                self._push(i, v)
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _tree_rule(self, t: cython.int) -> cython.int:
        # exactly-one-adjacent-tent bookkeeping for a tree
        if self.tadj[t] > 1:
            return 0
        if self.tadj[t] == 0 and self.tund[t] == 0:
            return 0
        k: cython.int
        ni: cython.int
        if self.tadj[t] == 1 and self.tund[t] > 0:
            for k in range(4):
                ni = self._orth(t, k)
                if ni >= 0 and self.trees[ni] == 0 and self.status[ni] == 0:
                    self._push(ni, 1)
        elif self.tadj[t] == 0 and self.tund[t] == 1:
            for k in range(4):
                ni = self._orth(t, k)
                if ni >= 0 and self.trees[ni] == 0 and self.status[ni] == 0:
                    self._push(ni, 2)
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _assign(self, i: cython.int, v: cython.int) -> cython.int:
        w: cython.int = self.w
        y: cython.int = i // w
        x: cython.int = i % w
        self.status[i] = v
        self.trail[self.tlen] = i
        self.tlen += 1
        self.row_f[y] -= 1
        self.col_f[x] -= 1
        fail: cython.int = 0
        is_tent: cython.int = 1 if v == 2 else 0
        if is_tent != 0:
            self.row_t[y] += 1
            self.col_t[x] += 1
            dy: cython.int
            dx: cython.int
            for dy in range(3):
                for dx in range(3):
                    if dy == 1 and dx == 1:
                        continue
                    ny: cython.int = y + dy - 1
                    nx: cython.int = x + dx - 1
                    if 0 <= ny < self.h and 0 <= nx < w:
                        nb: cython.int = ny * w + nx
                        if self.trees[nb] != 0:
                            continue
                        if self.status[nb] == 2:
                            fail = 1
                        elif self.status[nb] == 0:
                            self._push(nb, 1)
        if self.row_t[y] > self.rowc[y] or self.col_t[x] > self.colc[x]:
            fail = 1
        if self.row_t[y] + self.row_f[y] < self.rowc[y]:
            fail = 1
        if self.col_t[x] + self.col_f[x] < self.colc[x]:
            fail = 1
        if fail == 0:
            if self.row_f[y] > 0:
                if self.row_t[y] == self.rowc[y]:
                    self._force_row(y, 1)
                elif self.row_t[y] + self.row_f[y] == self.rowc[y]:
                    self._force_row(y, 2)
            if self.col_f[x] > 0:
                if self.col_t[x] == self.colc[x]:
                    self._force_col(x, 1)
                elif self.col_t[x] + self.col_f[x] == self.colc[x]:
                    self._force_col(x, 2)
        t: cython.int
        ni: cython.int
        for t in range(4):
            ni = self._orth(i, t)
            if ni >= 0 and self.trees[ni] != 0:
                self.tund[ni] -= 1
                if is_tent != 0:
                    self.tadj[ni] += 1
                if fail == 0 and self._tree_rule(ni) == 0:
                    fail = 1
        return 0 if fail != 0 else 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _drain(self) -> cython.int:
        while self.qhead < self.qtail:
            item: cython.int = self.queue[self.qhead]
            self.qhead += 1
            i: cython.int = item // 4
            v: cython.int = item % 4
            s: cython.int = self.status[i]
            if s == v:
                continue
            if s != 0:
                return 0
            if self._assign(i, v) == 0:
                return 0
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _undo(self, t0: cython.int) -> cython.int:
        w: cython.int = self.w
        while self.tlen > t0:
            self.tlen -= 1
            i: cython.int = self.trail[self.tlen]
            v: cython.int = self.status[i]
            self.status[i] = 0
            y: cython.int = i // w
            x: cython.int = i % w
            self.row_f[y] += 1
            self.col_f[x] += 1
            is_tent: cython.int = 1 if v == 2 else 0
            if is_tent != 0:
                self.row_t[y] -= 1
                self.col_t[x] -= 1
            t: cython.int
            for t in range(4):
                ni: cython.int = self._orth(i, t)
                if ni >= 0 and self.trees[ni] != 0:
                    self.tund[ni] += 1
                    if is_tent != 0:
                        self.tadj[ni] -= 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _search(self, ptr: cython.int) -> cython.int:
        while ptr < self.n and (self.trees[ptr] != 0 or self.status[ptr] != 0):
            ptr += 1
        if ptr == self.n:
            base: cython.int = self.nsol * self.n
            i: cython.int
            for i in range(self.n):
                self.out[base + i] = 3 if self.trees[i] != 0 else self.status[i]
            self.nsol += 1
            return 1 if self.nsol >= self.cap else 0
        v: cython.int
        for v in range(1, 3):
            t0: cython.int = self.tlen
            self.nodes += 1
            if self.nodes >= self.budget:
                return 1  # search aborted; caller inspects the node count
            self.qhead = 0
            self.qtail = 0
            self._push(ptr, v)
            if self._drain() != 0:
                if self._search(ptr + 1) != 0:
                    return 1
            self._undo(t0)
        return 0

    def run(self):
        sr: cython.int = 0
        sc: cython.int = 0
        y: cython.int
        x: cython.int
        i: cython.int
        for y in range(self.h):
            sr += self.rowc[y]
            if self.rowc[y] > self.row_f[y]:
                return 0, 0
        for x in range(self.w):
            sc += self.colc[x]
            if self.colc[x] > self.col_f[x]:
                return 0, 0
        if sr != sc:
            return 0, 0
        self.qhead = 0
        self.qtail = 0
        ok: cython.int = 1
        for y in range(self.h):
            if self.row_f[y] > 0:
                if self.rowc[y] == 0:
                    self._force_row(y, 1)
                elif self.rowc[y] == self.row_f[y]:
                    self._force_row(y, 2)
        for x in range(self.w):
            if self.col_f[x] > 0:
                if self.colc[x] == 0:
                    self._force_col(x, 1)
                elif self.colc[x] == self.col_f[x]:
                    self._force_col(x, 2)
        for i in range(self.n):
            if self.trees[i] != 0 and self._tree_rule(i) == 0:
                ok = 0
        if ok != 0 and self._drain() != 0:
            self._search(0)
        return self.nsol, self.nodes


def solve_tents(trees, rowc, colc, w, h, cap, budget, out, status,
                row_t, col_t, row_f, col_f, tadj, tund, trail, queue):
    s = _TentsSolver(trees, rowc, colc, w, h, cap, budget, out, status,
                     row_t, col_t, row_f, col_f, tadj, tund, trail, queue)
    return s.run()


# --------------------------------------------------------------------------
# Lightup (akari): open cells take {1 empty, 2 bulb} internally (shifted by
# one so 0 can mean unassigned); output is shifted back to {0, 1}.
# Propagation: lit counts per cell; pot[i] tracks how many unassigned cells
# could still light i, forcing a bulb when one candidate remains; numbered
# black squares force bulbs/empties on their neighbors when tight.
# --------------------------------------------------------------------------

@cython.cclass
class _LightupSolver:
    black: cython.char[:]
    clue: cython.char[:]
    status: cython.char[:]
    lit: cython.char[:]
    pot: cython.char[:]
    badj: cython.char[:]
    uadj: cython.char[:]
    trail: cython.int[:]
    queue: cython.int[:]
    out: cython.char[:]
    w: cython.int
    h: cython.int
    n: cython.int
    cap: cython.int
    nsol: cython.int
    nodes: cython.int
    tlen: cython.int
    qhead: cython.int
    qtail: cython.int

    def __init__(self, black, clue, w, h, cap, out, status, lit, pot,
                 badj, uadj, trail, queue):
        self.black = black
        self.clue = clue
        self.w = w
        self.h = h
        self.n = w * h
        self.cap = cap
        self.out = out
        self.status = status
        self.lit = lit
        self.pot = pot
        self.badj = badj
        self.uadj = uadj
        self.trail = trail
        self.queue = queue
        self.nsol = 0
        self.nodes = 0
        self.tlen = 0
        self.qhead = 0
        self.qtail = 0
        i: cython.int
        for i in range(self.n):
            self.status[i] = 0
            self.lit[i] = 0
            self.pot[i] = 0
            self.badj[i] = 0
            self.uadj[i] = 0
        y: cython.int
        x: cython.int
        k: cython.int
        for y in range(self.h):
            for x in range(self.w):
                i = y * self.w + x
                if self.black[i] != 0:
                    if self.clue[i] >= 0:
                        if x > 0 and self.black[i - 1] == 0:
                            self.uadj[i] += 1
                        if x + 1 < self.w and self.black[i + 1] == 0:
                            self.uadj[i] += 1
                        if y > 0 and self.black[i - self.w] == 0:
                            self.uadj[i] += 1
                        if y + 1 < self.h and self.black[i + self.w] == 0:
                            self.uadj[i] += 1
                    continue
                # open: count unassigned candidates that could light this cell
                cnt: cython.int = 1
                k = x - 1
                while k >= 0 and self.black[y * self.w + k] == 0:
                    cnt += 1
                    k -= 1
                k = x + 1
                while k < self.w and self.black[y * self.w + k] == 0:
                    cnt += 1
                    k += 1
                k = y - 1
                while k >= 0 and self.black[k * self.w + x] == 0:
                    cnt += 1
                    k -= 1
                k = y + 1
                while k < self.h and self.black[k * self.w + x] == 0:
                    cnt += 1
                    k += 1
                self.pot[i] = cnt

    @cython.cfunc
    @cython.exceptval(check=False)
    def _push(self, i: cython.int, v: cython.int) -> cython.int:
        self.queue[self.qtail] = i * 4 + v
        self.qtail += 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _mark_lit(self, i: cython.int, delta: cython.int) -> cython.int:
        w: cython.int = self.w
        y: cython.int = i // w
        x: cython.int = i % w
        self.lit[i] += delta
        k: cython.int
        k = x - 1
        while k >= 0 and self.black[y * w + k] == 0:
            self.lit[y * w + k] += delta
            k -= 1
        k = x + 1
        while k < w and self.black[y * w + k] == 0:
            self.lit[y * w + k] += delta
            k += 1
        k = y - 1
        while k >= 0 and self.black[k * w + x] == 0:
            self.lit[k * w + x] += delta
            k -= 1
        k = y + 1
        while k < self.h and self.black[k * w + x] == 0:
            self.lit[k * w + x] += delta
            k += 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _force_lighter(self, c: cython.int) -> cython.int:
        # push a bulb onto the single remaining unassigned cell of c's cross
        w: cython.int = self.w
        y: cython.int = c // w
        x: cython.int = c % w
        if self.status[c] == 0:
            self._push(c, 2)
            return 0
        k: cython.int
        k = x - 1
        while k >= 0 and self.black[y * w + k] == 0:
            if self.status[y * w + k] == 0:
                self._push(y * w + k, 2)
                return 0
            k -= 1
        k = x + 1
        while k < w and self.black[y * w + k] == 0:
            if self.status[y * w + k] == 0:
                self._push(y * w + k, 2)
                return 0
            k += 1
        k = y - 1
        while k >= 0 and self.black[k * w + x] == 0:
            if self.status[k * w + x] == 0:
                self._push(k * w + x, 2)
                return 0
            k -= 1
        k = y + 1
        while k < self.h and self.black[k * w + x] == 0:
            if self.status[k * w + x] == 0:
                self._push(k * w + x, 2)
                return 0
            k += 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _pot_check(self, c: cython.int) -> cython.int:
        if self.lit[c] > 0:
            return 1
        if self.pot[c] == 0:
            return 0
        if self.pot[c] == 1:
            self._force_lighter(c)
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _pot_walk(self, i: cython.int, delta: cython.int, check: cython.int) -> cython.int:
        # adjust "possible lighter" counts along i's cross after (un)assign
        w: cython.int = self.w
        y: cython.int = i // w
        x: cython.int = i % w
        ok: cython.int = 1
        self.pot[i] += delta
        if check != 0 and self._pot_check(i) == 0:
            ok = 0
        k: cython.int
        k = x - 1
        while k >= 0 and self.black[y * w + k] == 0:
            self.pot[y * w + k] += delta
            if check != 0 and self._pot_check(y * w + k) == 0:
                ok = 0
            k -= 1
        k = x + 1
        while k < w and self.black[y * w + k] == 0:
            self.pot[y * w + k] += delta
            if check != 0 and self._pot_check(y * w + k) == 0:
                ok = 0
            k += 1
        k = y - 1
        while k >= 0 and self.black[k * w + x] == 0:
            self.pot[k * w + x] += delta
            if check != 0 and self._pot_check(k * w + x) == 0:
                ok = 0
            k -= 1
        k = y + 1
        while k < self.h and self.black[k * w + x] == 0:
            self.pot[k * w + x] += delta
            if check != 0 and self._pot_check(k * w + x) == 0:
                ok = 0
            k += 1
        return ok

    @cython.cfunc
    @cython.exceptval(check=False)
    def _black_rule(self, j: cython.int) -> cython.int:
        c: cython.int = self.clue[j]
        if self.badj[j] > c or self.badj[j] + self.uadj[j] < c:
            return 0
        if self.uadj[j] > 0:
            v: cython.int = 0
            if self.badj[j] == c:
                v = 1
            elif self.badj[j] + self.uadj[j] == c:
                v = 2
            if v != 0:
                w: cython.int = self.w
                y: cython.int = j // w
                x: cython.int = j % w
                if x > 0 and self.black[j - 1] == 0 and self.status[j - 1] == 0:
                    self._push(j - 1, v)
                if x + 1 < w and self.black[j + 1] == 0 and self.status[j + 1] == 0:
                    self._push(j + 1, v)
                if y > 0 and self.black[j - w] == 0 and self.status[j - w] == 0:
                    self._push(j - w, v)
                if y + 1 < self.h and self.black[j + w] == 0 and self.status[j + w] == 0:
                    self._push(j + w, v)
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _assign(self, i: cython.int, v: cython.int) -> cython.int:
        w: cython.int = self.w
        is_bulb: cython.int = 1 if v == 2 else 0
        fail: cython.int = 0
        if is_bulb != 0 and self.lit[i] > 0:
            fail = 1  # would see the bulb that lights this cell
        self.status[i] = v
        self.trail[self.tlen] = i
        self.tlen += 1
        if is_bulb != 0:
            self._mark_lit(i, 1)
        if self._pot_walk(i, -1, 1 if fail == 0 else 0) == 0:
            fail = 1
        y: cython.int = i // w
        x: cython.int = i % w
        t: cython.int
        ni: cython.int
        for t in range(4):
            ni = -1
            if t == 0 and x > 0:
                ni = i - 1
            elif t == 1 and x + 1 < w:
                ni = i + 1
            elif t == 2 and y > 0:
                ni = i - w
            elif t == 3 and y + 1 < self.h:
                ni = i + w
            if ni >= 0 and self.black[ni] != 0 and self.clue[ni] >= 0:
                self.uadj[ni] -= 1
                if is_bulb != 0:
                    self.badj[ni] += 1
                if fail == 0 and self._black_rule(ni) == 0:
                    fail = 1
        return 0 if fail != 0 else 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _drain(self) -> cython.int:
        while self.qhead < self.qtail:
            item: cython.int = self.queue[self.qhead]
            self.qhead += 1
            i: cython.int = item // 4
            v: cython.int = item % 4
            s: cython.int = self.status[i]
            if s == v:
                continue
            if s != 0:
                return 0
            if self._assign(i, v) == 0:
                return 0
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _undo(self, t0: cython.int) -> cython.int:
        w: cython.int = self.w
        while self.tlen > t0:
            self.tlen -= 1
            i: cython.int = self.trail[self.tlen]
            v: cython.int = self.status[i]
            is_bulb: cython.int = 1 if v == 2 else 0
            self.status[i] = 0
            if is_bulb != 0:
                self._mark_lit(i, -1)
            self._pot_walk(i, 1, 0)
            y: cython.int = i // w
            x: cython.int = i % w
            t: cython.int
            ni: cython.int
            for t in range(4):
                ni = -1
                if t == 0 and x > 0:
                    ni = i - 1
                elif t == 1 and x + 1 < w:
                    ni = i + 1
                elif t == 2 and y > 0:
                    ni = i - w
                elif t == 3 and y + 1 < self.h:
                    ni = i + w
                if ni >= 0 and self.black[ni] != 0 and self.clue[ni] >= 0:
                    self.uadj[ni] += 1
                    if is_bulb != 0:
                        self.badj[ni] -= 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _search(self, ptr: cython.int) -> cython.int:
        while ptr < self.n and (self.black[ptr] != 0 or self.status[ptr] != 0):
            ptr += 1
        if ptr == self.n:
            i: cython.int
            for i in range(self.n):
                if self.black[i] == 0 and self.lit[i] == 0:
                    return 0
            base: cython.int = self.nsol * self.n
            for i in range(self.n):
                self.out[base + i] = 0 if self.black[i] != 0 else self.status[i] - 1
            self.nsol += 1
            return 1 if self.nsol >= self.cap else 0
        v: cython.int
        for v in range(1, 3):
            t0: cython.int = self.tlen
            self.nodes += 1
            self.qhead = 0
            self.qtail = 0
            self._push(ptr, v)
            if self._drain() != 0:
                if self._search(ptr + 1) != 0:
                    return 1
            self._undo(t0)
        return 0

    def run(self):
        self.qhead = 0
        self.qtail = 0
        ok: cython.int = 1
        i: cython.int
        for i in range(self.n):
            if self.black[i] != 0:
                if self.clue[i] >= 0 and self._black_rule(i) == 0:
                    ok = 0
            elif self._pot_check(i) == 0:
                ok = 0
        if ok != 0 and self._drain() != 0:
            self._search(0)
        return self.nsol, self.nodes


def solve_lightup(black, clue, w, h, cap, out, status, lit, pot, badj, uadj,
                  trail, queue):
    s = _LightupSolver(black, clue, w, h, cap, out, status, lit, pot,
                       badj, uadj, trail, queue)
    return s.run()


# --------------------------------------------------------------------------
# Unruly: cells take {1 white, 2 black}. Propagation: two-same-adjacent and
# X_X gap patterns force the remaining cell of a window; a line reaching its
# half-count forces the rest to the other color. `first` gives the value
# tried first per cell (all-white for the deterministic public solve,
# randomized for board filling); `given` can carry a forced opposite value
# for the uniqueness-preserving deletion test.
# --------------------------------------------------------------------------

@cython.cclass
class _UnrulySolver:
    given: cython.char[:]
    status: cython.char[:]
    first: cython.char[:]
    cw: cython.int[:]
    cb: cython.int[:]
    cf: cython.int[:]
    rw: cython.int[:]
    rb: cython.int[:]
    rf: cython.int[:]
    trail: cython.int[:]
    queue: cython.int[:]
    out: cython.char[:]
    w: cython.int
    h: cython.int
    n: cython.int
    halfw: cython.int
    halfh: cython.int
    cap: cython.int
    nsol: cython.int
    nodes: cython.long
    budget: cython.long
    tlen: cython.int
    qhead: cython.int
    qtail: cython.int

    def __init__(self, given, first, w, h, cap, budget, out, status,
                 rw, rb, rf, cw, cb, cf, trail, queue):
        self.given = given
        self.first = first
        self.budget = budget
        self.w = w
        self.h = h
        self.n = w * h
        self.halfw = w // 2
        self.halfh = h // 2
        self.cap = cap
        self.out = out
        self.status = status
        self.rw = rw
        self.rb = rb
        self.rf = rf
        self.cw = cw
        self.cb = cb
        self.cf = cf
        self.trail = trail
        self.queue = queue
        self.nsol = 0
        self.nodes = 0
        self.tlen = 0
        i: cython.int
        for i in range(self.n):
            self.status[i] = 0
        y: cython.int
        x: cython.int
        for y in range(h):
            self.rw[y] = 0
            self.rb[y] = 0
            self.rf[y] = w
        for x in range(w):
            self.cw[x] = 0
            self.cb[x] = 0
            self.cf[x] = h

    @cython.cfunc
    @cython.exceptval(check=False)
    def _push(self, i: cython.int, v: cython.int) -> cython.int:
        self.queue[self.qtail] = i * 4 + v
        self.qtail += 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _window(self, a: cython.int, b: cython.int, c: cython.int) -> cython.int:
        sa: cython.int = int(self.status[a])
        sb: cython.int = int(self.status[b])
        sc: cython.int = int(self.status[c])
        if sa != 0 and sa == sb and sb == sc:
            return 0
        if sa != 0 and sa == sb and sc == 0:
            self._push(c, 3 - sa)
        elif sa != 0 and sa == sc and sb == 0:
            self._push(b, 3 - sa)
        elif sb != 0 and sb == sc and sa == 0:
            self._push(a, 3 - sb)
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _force_row(self, y: cython.int, v: cython.int) -> cython.int:
        w: cython.int = self.w
        k: cython.int
        for k in range(w):
            if self.status[y * w + k] == 0:
                self._push(y * w + k, v)
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _force_col(self, x: cython.int, v: cython.int) -> cython.int:
        w: cython.int = self.w
        k: cython.int
        for k in range(self.h):
            if self.status[k * w + x] == 0:
                self._push(k * w + x, v)
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _assign(self, i: cython.int, v: cython.int) -> cython.int:
        w: cython.int = self.w
        y: cython.int = i // w
        x: cython.int = i % w
        self.status[i] = v
        self.trail[self.tlen] = i
        self.tlen += 1
        self.rf[y] -= 1
        self.cf[x] -= 1
        if v == 1:
            self.rw[y] += 1
            self.cw[x] += 1
        else:
            self.rb[y] += 1
            self.cb[x] += 1
        if self.rw[y] > self.halfw or self.rb[y] > self.halfw:
            return 0
        if self.cw[x] > self.halfh or self.cb[x] > self.halfh:
            return 0
        if self.rw[y] + self.rf[y] < self.halfw or self.rb[y] + self.rf[y] < self.halfw:
            return 0
        if self.cw[x] + self.cf[x] < self.halfh or self.cb[x] + self.cf[x] < self.halfh:
            return 0
        a: cython.int
        a0: cython.int = x - 2 if x >= 2 else 0
        a1: cython.int = x if x <= w - 3 else w - 3
        for a in range(a0, a1 + 1):
            if self._window(y * w + a, y * w + a + 1, y * w + a + 2) == 0:
                return 0
        a0 = y - 2 if y >= 2 else 0
        a1 = y if y <= self.h - 3 else self.h - 3
        for a in range(a0, a1 + 1):
            if self._window(a * w + x, (a + 1) * w + x, (a + 2) * w + x) == 0:
                return 0
        if self.rw[y] == self.halfw and self.rf[y] > 0:
            self._force_row(y, 2)
        elif self.rb[y] == self.halfw and self.rf[y] > 0:
            self._force_row(y, 1)
        if self.cw[x] == self.halfh and self.cf[x] > 0:
            self._force_col(x, 2)
        elif self.cb[x] == self.halfh and self.cf[x] > 0:
            self._force_col(x, 1)
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _drain(self) -> cython.int:
        while self.qhead < self.qtail:
            item: cython.int = self.queue[self.qhead]
            self.qhead += 1
            i: cython.int = item // 4
            v: cython.int = item % 4
            s: cython.int = self.status[i]
            if s == v:
                continue
            if s != 0:
                return 0
            if self._assign(i, v) == 0:
                return 0
        return 1

    @cython.cfunc
    @cython.exceptval(check=False)
    def _undo(self, t0: cython.int) -> cython.int:
        w: cython.int = self.w
        while self.tlen > t0:
            self.tlen -= 1
            i: cython.int = self.trail[self.tlen]
            v: cython.int = self.status[i]
            self.status[i] = 0
            y: cython.int = i // w
            x: cython.int = i % w
            self.rf[y] += 1
            self.cf[x] += 1
            if v == 1:
                self.rw[y] -= 1
                self.cw[x] -= 1
            else:
                self.rb[y] -= 1
                self.cb[x] -= 1
        return 0

    @cython.cfunc
    @cython.exceptval(check=False)
    def _search(self, ptr: cython.int) -> cython.int:
        while ptr < self.n and self.status[ptr] != 0:
            ptr += 1
        if ptr == self.n:
            base: cython.int = self.nsol * self.n
            i: cython.int
            for i in range(self.n):
                self.out[base + i] = self.status[i]
            self.nsol += 1
            return 1 if self.nsol >= self.cap else 0
        k: cython.int
        for k in range(2):
            v: cython.int = int(self.first[ptr]) if k == 0 else 3 - int(self.first[ptr])
            t0: cython.int = self.tlen
            self.nodes += 1
            if self.nodes >= self.budget:
                return 1  # search aborted; caller inspects the node count
            self.qhead = 0
            self.qtail = 0
            self._push(ptr, v)
            if self._drain() != 0:
                if self._search(ptr + 1) != 0:
                    return 1
            self._undo(t0)
        return 0

    def run(self):
        self.qhead = 0
        self.qtail = 0
        i: cython.int
        for i in range(self.n):
            if self.given[i] > 0:
                self._push(i, int(self.given[i]))
        if self._drain() != 0:
            self._search(0)
        return self.nsol, self.nodes


def solve_unruly(given, first, w, h, cap, budget, out, status,
                 rw, rb, rf, cw, cb, cf, trail, queue):
    s = _UnrulySolver(given, first, w, h, cap, budget, out, status,
                      rw, rb, rf, cw, cb, cf, trail, queue)
    return s.run()
