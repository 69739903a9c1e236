"""Minimum cycle covers and Hamiltonicity of grid graphs.

Within one component of the cover space (covers linked by square Z-moves)
the number of cycles is reduced one at a time:

1. Any locally extremal boundary square is flipped directly.
2. Otherwise critical boundary squares are scanned. An odd row starting at
   one (a half bridge) can be moved to join two cycles. An even row is
   turned into a bridge: its far square is moved, which splits a cycle and
   creates a new boundary subordinate to the one the row started on.
3. Once a half bridge exists, every boundary created on the way is removed
   again by using each bridge at one of its two ends, newest first, and
   finally the root boundary is joined.

If the scan finds nothing to do, the configuration reached (with its fixed
pairs) certifies that no cover in the component has fewer cycles.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from dataclasses import dataclass, field

from .chains import (
    exists_height,
    extremal_height,
    single_source,
    subgraph_from_height,
    subgraph_system,
)
from .cover import (
    CycleCover,
    NoCover,
    SquareClass,
    classify_square,
    find_initial_cover,
)
from .grid import FaceKind, GridGraph
from .height import (
    MAX,
    RowRef,
    Stuck,
    extremal_kind,
    signature,
    toggle_square,
    trace_row,
)

log = logging.getLogger(__name__)


def _checks_default() -> bool:
    return os.environ.get("GRIDHAM_CHECKS", "1") != "0"


class LemmaViolation(AssertionError):
    pass


# How many times each runtime check has passed in this process.
CHECKS: Counter = Counter()


# ---------------------------------------------------------------- state


class _State:
    """Mutable cover (edge flags) with cycle labels."""

    def __init__(self, h: CycleCover):
        self.g = h.g
        self.tab = h.g.squares
        self.in_h = bytearray(h.in_h)
        g = self.g
        self.incident = [
            [(g.vertex_edges[v][d], g.nbrs[v][d]) for d in range(4) if g.nbrs[v][d] >= 0]
            for v in range(len(g.points))
        ]
        self.other_faces = [
            (f.index, sorted({u for u, _ in f.boundary}))
            for f in g.faces.faces
            if f.kind is not FaceKind.SQUARE
        ]
        self.recompute()

    def recompute(self) -> None:
        n = len(self.g.points)
        cyc = [-1] * n
        in_h = self.in_h
        count = 0
        for start in range(n):
            if cyc[start] >= 0:
                continue
            cyc[start] = count
            prev, cur = -1, start
            while True:
                nxt = next(w for e, w in self.incident[cur] if in_h[e] and w != prev)
                if nxt == start or cyc[nxt] == count:
                    break
                cyc[nxt] = count
                prev, cur = cur, nxt
            count += 1
        self.cyc = cyc
        self.p = count

    def cover(self) -> CycleCover:
        return CycleCover(self.g, (e for e, x in enumerate(self.in_h) if x), check=False)

    def is_boundary(self, s: int) -> bool:
        cyc = self.cyc
        a, b, c, d = self.tab.corners[s]
        x = cyc[a]
        return cyc[b] != x or cyc[c] != x or cyc[d] != x

    def cycles_of(self, s: int) -> frozenset[int]:
        return frozenset(self.cyc[v] for v in self.tab.corners[s])

    def boundary_squares(self) -> list[int]:
        return [s for s in range(len(self.tab)) if self.is_boundary(s)]

    def boundary_faces(self) -> frozenset[int]:
        """Face ids of B(H)."""
        tab = self.tab
        out = {tab.face_of[s] for s in self.boundary_squares()}
        cyc = self.cyc
        for f, verts in self.other_faces:
            if len({cyc[v] for v in verts}) > 1:
                out.add(f)
        return frozenset(out)

    def face_cycles(self) -> dict[int, frozenset[int]]:
        tab = self.tab
        cyc = self.cyc
        out = {}
        for s in range(len(tab)):
            cs = frozenset(cyc[v] for v in tab.corners[s])
            if len(cs) > 1:
                out[tab.face_of[s]] = cs
        for f, verts in self.other_faces:
            cs = frozenset(cyc[v] for v in verts)
            if len(cs) > 1:
                out[f] = cs
        return out

    def extremal(self, s: int) -> int:
        return extremal_kind(self.tab, self.in_h, s)

    def flip(self, s: int) -> None:
        toggle_square(self.tab, self.in_h, s)

    def trace(self, s: int):
        return trace_row(self.tab, self.in_h, s, boundary=self.is_boundary)


def hill_climb(st: _State) -> int:
    """Flip extremal boundary squares until none is left; returns the flip count.

    Only merges happen here, so cycle identity is tracked with union-find and
    only the four side neighbours of a flipped square need rechecking.
    """
    tab = st.tab
    parent = list(range(st.p))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cyc = st.cyc
    flips = 0
    work = list(range(len(tab) - 1, -1, -1))
    queued = bytearray(len(tab))
    for s in work:
        queued[s] = 1
    while work:
        s = work.pop()
        queued[s] = 0
        roots = {find(cyc[v]) for v in tab.corners[s]}
        if len(roots) < 2 or not st.extremal(s):
            continue
        assert len(roots) == 2, "an extremal square touches three cycles"
        a, b = roots
        parent[a] = b
        st.flip(s)
        flips += 1
        for t in tab.across[s]:
            if t >= 0 and not queued[t]:
                queued[t] = 1
                work.append(t)
    if flips:
        st.recompute()
    return flips


# ---------------------------------------------------------------- records


@dataclass
class BoundaryRecord:
    index: int
    cycles: frozenset[int]  # the pair of cycles it separated when created
    faces: frozenset[int]
    parent: int | None = None
    creator: int | None = None  # bridge index


@dataclass
class BridgeRecord:
    index: int
    squares: tuple[int, ...]  # f0 ... f_{r-1}
    direction: int
    kind: int  # MAX: f0..f_{r-2} lowers, f_{r-1} raises
    parent: int  # boundary containing f0
    child: int  # boundary created at f_{r-1}


@dataclass
class FixedPair:
    upper: tuple[int, int]  # cell of the locally maximal square
    lower: tuple[int, int]
    direction: str  # "horizontal" or "vertical": the axis the pair lies along


@dataclass
class MinCycleCertificate:
    cover: CycleCover  # the stuck configuration
    m: int
    r: int
    fixed_pairs: list[FixedPair]
    bridges: list[list[tuple[int, int]]]
    critical: dict[tuple[int, int], str]  # cell -> "stuck" | "bridge"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "r": self.r,
            "fixed_pairs": [
                {"upper": list(fp.upper), "lower": list(fp.lower), "axis": fp.direction}
                for fp in self.fixed_pairs
            ],
            "bridges": [[list(c) for c in b] for b in self.bridges],
            "critical": [
                {"cell": list(c), "role": role} for c, role in sorted(self.critical.items())
            ],
            "cover": self.cover.to_json(),
        }


@dataclass
class Reduced:
    cover: CycleCover
    p: int
    bridges_used: int = 0


@dataclass
class Minimal:
    certificate: MinCycleCertificate


def trivial_certificate(h: CycleCover) -> MinCycleCertificate:
    return MinCycleCertificate(h, h.p, 0, [], [], {})


# ---------------------------------------------------------------- the bridge phase


class _BridgePhase:
    def __init__(self, st: _State, check: bool):
        self.st = st
        self.check = check
        self.orig_faces = st.boundary_faces()
        self.orig_p = st.p
        self.orig_in_h = bytes(st.in_h)
        self.boundaries: list[BoundaryRecord] = []
        pairs: dict[frozenset[int], set[int]] = {}
        for f, cs in sorted(st.face_cycles().items()):
            ordered = sorted(cs)
            for i in range(len(ordered)):
                for j in range(i + 1, len(ordered)):
                    pairs.setdefault(frozenset((ordered[i], ordered[j])), set()).add(f)
        for pair in sorted(pairs, key=sorted):
            self.boundaries.append(BoundaryRecord(len(self.boundaries), pair, frozenset(pairs[pair])))
        self.roots = len(self.boundaries)
        self.bridges: list[BridgeRecord] = []
        self.bridge_of: dict[int, int] = {}  # square -> bridge index
        self.pending: list[int] = []

    # -- lookups

    def boundary_of(self, s: int) -> BoundaryRecord:
        """Latest recorded boundary that contains square s and still separates it."""
        st = self.st
        face = st.tab.face_of[s]
        cs = st.cycles_of(s)
        best = None
        for b in self.boundaries:
            if face in b.faces:
                best = b
        if best is None:
            raise LemmaViolation(f"square {st.tab.cells[s]} is on no recorded boundary ({sorted(cs)})")
        return best

    def neighbours(self, s: int) -> list[int]:
        return [t for t in self.st.tab.across[s] if t >= 0]

    # -- main loop

    def run(self) -> Reduced | Minimal:
        st = self.st
        if self.check:
            self._lemma_one()
            CHECKS["boundary_classes"] += 1
        while True:
            found = self._next_candidate()
            if found is None:
                return Minimal(self._certificate())
            what, row = found
            if what == "half":
                self._finish(row)
                return Reduced(st.cover(), st.p, len(self.bridges))
            self._make_bridge(row)

    def _lemma_one(self) -> None:
        st = self.st
        for s in st.boundary_squares():
            if st.extremal(s):
                raise LemmaViolation("bridge phase started with an extremal boundary square")
            cls, _ = classify_square(st.tab, s, st.in_h, st.cyc)
            if cls not in (SquareClass.CRITICAL, SquareClass.CORNER):
                raise LemmaViolation(
                    f"boundary square {st.tab.cells[s]} is {cls.value}, expected critical or corner"
                )

    def _next_candidate(self):
        st = self.st
        while self.pending:
            s = self.pending.pop(0)
            if s not in self.bridge_of and st.is_boundary(s) and st.extremal(s):
                return self._substitute("half", self._single(s))
        boundary = st.boundary_squares()
        for s in boundary:
            if s not in self.bridge_of and st.extremal(s):
                return self._substitute("half", self._single(s))
        for s in boundary:
            if s in self.bridge_of:
                continue
            cls, info = classify_square(st.tab, s, st.in_h, st.cyc)
            if cls is not SquareClass.CRITICAL:
                continue
            res = st.trace(s)
            if isinstance(res, Stuck) or res is None:
                continue
            if self.check and res.direction != info.out_side:
                raise LemmaViolation("row from a critical square does not leave through its open side")
            if res.odd:
                return self._substitute("half", res)
            return self._substitute("bridge", res)
        return None

    def _single(self, s: int) -> RowRef:
        return RowRef(s, -1, (s,), self.st.extremal(s))

    # -- the substitution rule near bridge ends

    def _outside_ends(self) -> dict[int, tuple[int, int, int]]:
        """Square just beyond either end of a bridge -> (bridge, end square, outward side)."""
        tab = self.st.tab
        out = {}
        for b in self.bridges:
            d = b.direction
            for end, side in ((b.squares[0], (d + 2) % 4), (b.squares[-1], d)):
                o = tab.across[end][side]
                if o >= 0:
                    out[o] = (b.index, end, side)
        return out

    def _substitute(self, what: str, row: RowRef):
        if not self.bridges:
            return what, row
        ends = self._outside_ends()
        touched = [row.squares[0]]
        if what == "half":
            touched.append(row.squares[-1])
        hit = next((s for s in touched if s in ends), None)
        if hit is None:
            return what, row
        _, end, side = ends[hit]
        tab = self.st.tab
        st = self.st
        options = []
        for turn in (1, 3):  # left and right of the outward direction
            x = tab.across[end][(side + turn) % 4]
            xo = tab.across[hit][(side + turn) % 4] if x >= 0 else -1
            options.append((x, xo))

        def pair_bridge(x: int, xo: int) -> bool:
            b = self.bridge_of.get(x)
            return b is not None and set(self.bridges[b].squares) == {x, xo}

        def starts_bridge(xo: int) -> bool:
            b = self.bridge_of.get(xo)
            return b is not None and self.bridges[b].squares[0] == xo

        (a, ao), (b, bo) = options
        order: list[int] = []
        if pair_bridge(a, ao) and not pair_bridge(b, bo):
            order = [b]
        elif pair_bridge(b, bo) and not pair_bridge(a, ao):
            order = [a]
        else:
            if not starts_bridge(ao):
                order.append(a)
            if not starts_bridge(bo):
                order.append(b)
            if not order:
                # both outer squares start bridges: take the side whose
                # outer square stays out of every row that will be moved
                for x, xo in options:
                    if x >= 0 and xo not in self._moved_squares(self._single_safe(x)):
                        order.append(x)
        for x in order:
            if x >= 0 and x not in self.bridge_of and st.is_boundary(x) and st.extremal(x):
                log.debug("half bridge moved from %s to %s", tab.cells[hit], tab.cells[x])
                return "half", self._single(x)
        raise LemmaViolation(f"no substitute half bridge next to {tab.cells[hit]}")

    def _single_safe(self, x: int) -> RowRef | None:
        st = self.st
        if x < 0 or not st.extremal(x) or not st.is_boundary(x):
            return None
        return self._single(x)

    def _moved_squares(self, half: RowRef | None) -> set[int]:
        if half is None:
            return set()
        out: set[int] = set()
        for _, squares in self._plan(half):
            out.update(squares)
        return out

    # -- bridges

    def _make_bridge(self, row: RowRef) -> None:
        st = self.st
        parent = self.boundary_of(row.squares[0])
        top = row.squares[-1]
        if self.check and st.is_boundary(top):
            raise LemmaViolation("the far square of an even row is already on a boundary")
        before = st.p
        st.flip(top)
        st.recompute()
        if self.check and st.p != before + 1:
            raise LemmaViolation("moving the far square of an even row did not split a cycle")
        pieces = st.cycles_of(top)
        faces = frozenset(f for f, cs in st.face_cycles().items() if pieces <= cs)
        bi = len(self.bridges)
        child = BoundaryRecord(len(self.boundaries), pieces, faces, parent.index, bi)
        self.boundaries.append(child)
        self.bridges.append(BridgeRecord(bi, row.squares, row.direction, row.kind, parent.index, child.index))
        for s in row.squares:
            self.bridge_of[s] = bi
        log.debug("bridge %d of length %d from %s", bi, len(row.squares), st.tab.cells[row.squares[0]])
        # a square now touching three cycles sends us to the square across
        # the edge joining its two lone corners
        tab = st.tab
        for f in sorted(faces):
            s = tab.square_of_face.get(f)
            if s is None:
                continue
            cs = [st.cyc[v] for v in tab.corners[s]]
            if len(set(cs)) < 3:
                continue
            lone = [i for i in range(4) if cs.count(cs[i]) == 1]
            for d, (i, j) in enumerate(((1, 2), (2, 3), (3, 0), (0, 1))):
                if i in lone and j in lone:
                    other = tab.across[s][d]
                    if other >= 0:
                        self.pending.append(other)

    # -- unwinding

    def _plan(self, half: RowRef) -> list[tuple[int | None, tuple[int, ...]]]:
        """(boundary index, squares to move) in execution order; root last."""
        hb = self.boundary_of(half.squares[0])
        path_bridge: dict[int, BridgeRecord] = {}
        b = hb
        while b.parent is not None:
            path_bridge[b.parent] = self.bridges[b.creator]
            b = self.boundaries[b.parent]
        root = b
        steps = []
        for rec in reversed(self.boundaries[self.roots :]):
            if rec.index == hb.index:
                steps.append((rec.index, half.squares))
            elif rec.index in path_bridge:
                steps.append((rec.index, path_bridge[rec.index].squares[:-1]))
            else:
                steps.append((rec.index, self.bridges[rec.creator].squares[-1:]))
        if root.index == hb.index:
            steps.append((root.index, half.squares))
        else:
            steps.append((root.index, path_bridge[root.index].squares[:-1]))
        return steps

    def _check_rows(self, steps) -> None:
        seen: dict[int, int] = {}
        for k, (_, squares) in enumerate(steps):
            for s in squares:
                if s in seen:
                    raise LemmaViolation(f"square {self.st.tab.cells[s]} is in two moved rows")
                seen[s] = k
        for s, k in seen.items():
            for t in self.neighbours(s):
                if t in seen and seen[t] != k:
                    raise LemmaViolation(
                        f"moved rows touch at {self.st.tab.cells[s]} and {self.st.tab.cells[t]}"
                    )

    def _finish(self, half: RowRef) -> None:
        st = self.st
        steps = self._plan(half)
        if self.check:
            self._check_rows(steps)
            CHECKS["disjoint_rows"] += 1
        for k, (bidx, squares) in enumerate(steps):
            before = st.p
            for s in reversed(squares):
                if not st.extremal(s):
                    raise LemmaViolation(f"square {st.tab.cells[s]} is not extremal when its row is moved")
                st.flip(s)
            st.recompute()
            if self.check and st.p != before - 1:
                raise LemmaViolation(f"joining across boundary {bidx} changed p by {st.p - before}")
            if self.check and k == len(steps) - 2 and st.boundary_faces() != self.orig_faces:
                raise LemmaViolation("boundary set not restored after unwinding the new boundaries")
            if self.check and k == len(steps) - 2:
                CHECKS["boundaries_restored"] += 1
        if self.check and st.p != self.orig_p - 1:
            raise LemmaViolation("reduction did not remove exactly one cycle")
        if self.check:
            CHECKS["joins"] += 1

    # -- getting stuck

    def _certificate(self) -> MinCycleCertificate:
        st = self.st
        tab = st.tab
        pairs = []
        for b in self.bridges:
            hi, lo = b.squares[-2], b.squares[-1]
            if b.kind != MAX:
                hi, lo = lo, hi
            axis = "horizontal" if b.direction in (0, 2) else "vertical"
            pairs.append(FixedPair(tuple(tab.cells[hi]), tuple(tab.cells[lo]), axis))
        critical = {}
        for s in st.boundary_squares():
            cls, _ = classify_square(tab, s, st.in_h, st.cyc)
            if cls is SquareClass.CRITICAL:
                critical[tuple(tab.cells[s])] = "bridge" if s in self.bridge_of else "stuck"
        return MinCycleCertificate(
            st.cover(),
            self.orig_p,
            len(self.bridges),
            pairs,
            [[tuple(tab.cells[s]) for s in b.squares] for b in self.bridges],
            critical,
        )


# ---------------------------------------------------------------- public operations


def reduce_once(h: CycleCover, check: bool | None = None) -> Reduced | Minimal:
    check = _checks_default() if check is None else check
    st = _State(h)
    if st.p < 2:
        return Minimal(trivial_certificate(h))
    for s in st.boundary_squares():
        if st.extremal(s):
            st.flip(s)
            st.recompute()
            return Reduced(st.cover(), st.p)
    return _BridgePhase(st, check).run()


@dataclass
class Minimized:
    cover: CycleCover
    certificate: MinCycleCertificate
    reductions: int
    hill_flips: int


def minimize_in_component(h: CycleCover, check: bool | None = None) -> Minimized:
    check = _checks_default() if check is None else check
    st = _State(h)
    flips = hill_climb(st)
    reductions = 0
    while st.p >= 2:
        phase = _BridgePhase(st, check)
        res = phase.run()
        if isinstance(res, Minimal):
            cover = CycleCover(st.g, (e for e, x in enumerate(phase.orig_in_h) if x), check=False)
            return Minimized(cover, res.certificate, reductions, flips)
        reductions += 1
        flips += hill_climb(st)
    cover = st.cover()
    return Minimized(cover, trivial_certificate(cover), reductions, flips)


@dataclass
class ComponentResult:
    signature: tuple[int, ...]
    p: int
    cover: CycleCover
    certificate: MinCycleCertificate

    def to_json(self) -> dict:
        return {"signature": list(self.signature), "p": self.p, "certificate": self.certificate.to_json()}


@dataclass
class SearchResult:
    minimum: int
    witness: CycleCover
    components: list[ComponentResult] = field(default_factory=list)


def component_representatives(g: GridGraph, h0: CycleCover | None = None) -> list[CycleCover]:
    """One cover per component of the cover space, ordered by signature.

    Hole values of the cover-difference system (relative to h0, outer face
    at zero) index the components; each feasible vector is pinned and the
    pointwise largest field is turned back into a cover.
    """
    h0 = find_initial_cover(g) if h0 is None else h0
    fs = g.faces
    if not fs.holes:
        return [h0]
    sys = subgraph_system(g, h0.edges)
    anchors = [fs.outer] + list(fs.holes)
    dist = {a: single_source(sys, a) for a in anchors}
    lo = [-dist[h][fs.outer] for h in fs.holes]
    hi = [dist[fs.outer][h] for h in fs.holes]
    reps: dict[tuple[int, ...], CycleCover] = {}

    def go(i: int, vec: list[int]) -> None:
        if i == len(fs.holes):
            pinned = sys
            for h, t in zip(fs.holes, vec):
                pinned = pinned.pin(h, t)
            if not exists_height(pinned):
                return
            tau = extremal_height(pinned)
            cover = CycleCover(g, subgraph_from_height(g, h0.edges, tau))
            reps[signature(cover)] = cover
            return
        h = fs.holes[i]
        for t in range(lo[i], hi[i] + 1):
            ok = all(
                t - vec[j] <= dist[fs.holes[j]][h] and vec[j] - t <= dist[h][fs.holes[j]]
                for j in range(i)
            )
            if ok:
                go(i + 1, vec + [t])

    go(0, [])
    return [reps[k] for k in sorted(reps)]


def _minimize_job(args) -> tuple[tuple[int, ...], Minimized]:
    cover, check = args
    return signature(cover), minimize_in_component(cover, check)


def search_all_components(g: GridGraph, check: bool | None = None, jobs: int = 1) -> SearchResult:
    check = _checks_default() if check is None else check
    h0 = find_initial_cover(g)
    reps = component_representatives(g, h0)
    if jobs > 1 and len(reps) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_minimize_job, [(r, check) for r in reps]))
    else:
        done = [_minimize_job((r, check)) for r in reps]
    comps = [ComponentResult(sig, m.cover.p, m.cover, m.certificate) for sig, m in done]
    best = min(comps, key=lambda c: c.p)
    return SearchResult(best.p, best.cover, comps)


@dataclass
class HamiltonVerdict:
    hamiltonian: bool
    reason: str
    cycle: list[tuple[int, int]] | None = None
    search: SearchResult | None = None


def is_hamiltonian(g: GridGraph, check: bool | None = None, jobs: int = 1) -> HamiltonVerdict:
    if not g.two_connected:
        return HamiltonVerdict(False, "not 2-connected")
    try:
        res = search_all_components(g, check, jobs)
    except NoCover:
        return HamiltonVerdict(False, "no cycle cover")
    if res.minimum == 1:
        cyc = res.witness.cycles[0]
        return HamiltonVerdict(True, "hamiltonian", [tuple(g.points[v]) for v in cyc], res)
    return HamiltonVerdict(False, f"at least {res.minimum} cycles needed", None, res)


# ---------------------------------------------------------------- certificate checking


def verify_certificate(cert: MinCycleCertificate) -> list[str]:
    """Re-check the stuck configuration; returns a list of failures (empty if sound)."""
    h = cert.cover
    g = h.g
    tab = g.squares
    problems = []
    if h.p != cert.m + cert.r:
        problems.append(f"cover has {h.p} cycles, expected m + r = {cert.m + cert.r}")
    if len(cert.fixed_pairs) != cert.r:
        problems.append("fixed pair count differs from r")
    in_h = h.in_h
    members: dict[int, int] = {}
    for k, fp in enumerate(cert.fixed_pairs):
        hi, lo = tab.number[fp.upper], tab.number[fp.lower]
        for s in (hi, lo):
            if s in members:
                problems.append(f"fixed pairs overlap at {tab.cells[s]}")
            members[s] = k
        if lo not in tab.across[hi]:
            problems.append(f"fixed pair at {fp.upper} is not adjacent")
            continue
        d = tab.across[hi].index(lo)
        if not in_h[tab.edge[hi][d]]:
            problems.append(f"fixed pair at {fp.upper} is not separated by an edge of H")
        if extremal_kind(tab, in_h, hi) != MAX or extremal_kind(tab, in_h, lo) != -1:
            problems.append(f"fixed pair at {fp.upper} is not a local max over a local min")
    axis = {k: fp.direction for k, fp in enumerate(cert.fixed_pairs)}
    touching: dict[tuple[int, int], int] = {}
    for s, k in members.items():
        for d, t in enumerate(tab.across[s]):
            if t >= 0 and t in members and members[t] != k:
                same_axis = axis[k] == axis[members[t]]
                along = ("horizontal" if d in (0, 2) else "vertical") == axis[k]
                if not same_axis or not along:
                    problems.append(f"fixed pairs meet badly at {tab.cells[s]}")
                key = (min(k, members[t]), max(k, members[t]))
                touching[key] = touching.get(key, 0) + 1
    if any(n > 2 for n in touching.values()):  # each contact is seen from both sides
        problems.append("two fixed pairs touch at more than one square")
    cyc = h.cycle_of

    def on_boundary(x: int) -> bool:
        return len({cyc[v] for v in tab.corners[x]}) > 1

    for s in range(len(tab)):
        cls, _ = classify_square(tab, s, in_h, cyc)
        if cls is SquareClass.TRIPLE:
            problems.append(f"square {tab.cells[s]} touches three cycles")
        if cls is not SquareClass.CRITICAL:
            continue
        res = trace_row(tab, in_h, s, boundary=on_boundary)
        if isinstance(res, Stuck):
            continue
        if res is None or res.squares[-1] not in members:
            problems.append(f"critical square {tab.cells[s]} is neither stuck nor leads to a fixed pair")
    return problems
