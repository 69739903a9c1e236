"""Cycle covers (2-factors) of grid graphs and their boundary faces."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import networkx as nx

from .chains import Chain1
from .grid import FaceKind, GridGraph, sign


class NoCover(Exception):
    pass


class InvalidCover(ValueError):
    pass


def degree_subgraph(g: GridGraph, phi: Mapping[int, int] | int = 2) -> frozenset[int] | None:
    """A spanning subgraph with deg(v) = phi(v), or None if there is none.

    Max-flow on the bipartite gadget: source -> black (capacity phi),
    black -> white along each edge (capacity 1), white -> sink (capacity phi).
    """
    need = (lambda v: phi) if isinstance(phi, int) else phi.__getitem__
    black = [v for v, p in enumerate(g.points) if sign(p) > 0]
    white = [v for v, p in enumerate(g.points) if sign(p) < 0]
    total_b = sum(need(v) for v in black)
    if total_b != sum(need(v) for v in white):
        return None
    net = nx.DiGraph()
    for v in black:
        net.add_edge("s", ("v", v), capacity=need(v))
    for v in white:
        net.add_edge(("v", v), "t", capacity=need(v))
    for b, w in g.edges:
        net.add_edge(("v", b), ("v", w), capacity=1)
    if total_b == 0:
        return frozenset()
    value, flow = nx.maximum_flow(net, "s", "t")
    if value != total_b:
        return None
    return frozenset(eid for eid, (b, w) in enumerate(g.edges) if flow[("v", b)][("v", w)] > 0)


class CycleCover:
    """A 2-factor of ``g`` given by its edge ids. Treated as a value."""

    __slots__ = ("g", "edges", "__dict__")

    def __init__(self, g: GridGraph, edges: Iterable[int], check: bool = True):
        self.g = g
        self.edges = frozenset(edges)
        if check:
            deg = [0] * len(g.points)
            for eid in self.edges:
                b, w = g.edges[eid]
                deg[b] += 1
                deg[w] += 1
            bad = [g.points[v] for v, d in enumerate(deg) if d != 2]
            if bad:
                raise InvalidCover(f"{len(bad)} vertices without degree 2, first {tuple(bad[0])}")

    @classmethod
    def from_mask(cls, g: GridGraph, mask: int) -> "CycleCover":
        return cls(g, (e for e in range(len(g.edges)) if mask >> e & 1))

    @classmethod
    def from_point_pairs(cls, g: GridGraph, pairs: Iterable) -> "CycleCover":
        return cls(g, (g.edge_id(g.index[tuple(a)], g.index[tuple(b)]) for a, b in pairs))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CycleCover) and self.g == other.g and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __repr__(self) -> str:
        return f"CycleCover(p={self.p}, |H|={len(self.edges)})"

    def __contains__(self, eid: int) -> bool:
        return eid in self.edges

    @cached_property
    def mask(self) -> int:
        m = 0
        for e in self.edges:
            m |= 1 << e
        return m

    @cached_property
    def in_h(self) -> bytearray:
        arr = bytearray(len(self.g.edges))
        for e in self.edges:
            arr[e] = 1
        return arr

    @cached_property
    def _decomposition(self) -> tuple[list[int], list[list[int]]]:
        g = self.g
        adj: list[list[int]] = [[] for _ in g.points]
        for eid in self.edges:
            b, w = g.edges[eid]
            adj[b].append(w)
            adj[w].append(b)
        cycle_of = [-1] * len(g.points)
        cycles: list[list[int]] = []
        # vertex ids follow mask reading order, so the first unvisited vertex is the smallest
        for start in range(len(g.points)):
            if cycle_of[start] >= 0:
                continue
            cid = len(cycles)
            seq = [start]
            cycle_of[start] = cid
            prev, cur = start, min(adj[start])
            while cur != start:
                seq.append(cur)
                cycle_of[cur] = cid
                a, b = adj[cur]
                prev, cur = cur, (b if a == prev else a)
            cycles.append(seq)
        return cycle_of, cycles

    @property
    def cycle_of(self) -> list[int]:
        return self._decomposition[0]

    @property
    def cycles(self) -> list[list[int]]:
        return self._decomposition[1]

    @property
    def p(self) -> int:
        return len(self._decomposition[1])

    def toggled(self, edge_ids: Iterable[int]) -> "CycleCover":
        return CycleCover(self.g, self.edges.symmetric_difference(edge_ids))

    def edge_point_pairs(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        out = []
        for eid in self.edges:
            a, b = self.g.edge_points(eid)
            out.append(tuple(sorted((tuple(a), tuple(b)))))
        return sorted(out)

    def to_json(self) -> dict:
        pts = self.g.points
        return {
            "p": self.p,
            "edges": [[list(a), list(b)] for a, b in self.edge_point_pairs()],
            "cycles": [[list(pts[v]) for v in cyc] for cyc in self.cycles],
        }


def find_initial_cover(g: GridGraph) -> CycleCover:
    if not g.connected:
        raise NoCover("graph is not connected")
    edges = degree_subgraph(g, 2)
    if edges is None:
        raise NoCover("no spanning subgraph with all degrees 2")
    return CycleCover(g, edges)


def decompose(h: CycleCover) -> tuple[list[list[int]], int]:
    return h.cycles, h.p


def omega(h: CycleCover) -> Chain1:
    return {eid: 1 for eid in sorted(h.edges)}


class SquareClass(enum.Enum):
    CRITICAL = "critical"
    CORNER = "corner"
    TRIPLE = "triple"
    PLAIN = "plain"


@dataclass(frozen=True)
class CriticalInfo:
    in_side: int  # side (E/N/W/S) of the same-cycle pair edge that is in H
    out_side: int  # the opposite side, not in H
    in_edge: int
    out_edge: int
    kind: int  # +1: higher than the other three neighbours, -1: lower


def classify_square(tab, s: int, in_h, cycle_of) -> tuple[SquareClass | None, CriticalInfo | None]:
    """Boundary class of square number ``s`` (None if not a boundary square).

    Corners are numbered v00, v10, v11, v01; side d joins corners d and d+1
    counting from v10 for E: E=(v10,v11), N=(v11,v01), W=(v01,v00), S=(v00,v10).
    """
    c = [cycle_of[v] for v in tab.corners[s]]
    distinct = len(set(c))
    if distinct == 1:
        return None, None
    if distinct >= 3:
        return SquareClass.TRIPLE, None
    ends = ((1, 2), (2, 3), (3, 0), (0, 1))  # corner indices of sides E, N, W, S
    same = [c[a] == c[b] for a, b in ends]
    edges = tab.edge[s]
    counts = {x: c.count(x) for x in set(c)}
    if sorted(counts.values()) == [1, 3]:
        lone = next(i for i in range(4) if counts[c[i]] == 1)
        # the far sides avoid the lone corner
        far = [d for d, (a, b) in enumerate(ends) if lone not in (a, b)]
        if all(in_h[edges[d]] for d in far):
            return SquareClass.CORNER, None
        return SquareClass.PLAIN, None
    pair_sides = [d for d in range(4) if same[d]]
    if len(pair_sides) != 2:
        return SquareClass.PLAIN, None  # diagonal split
    held = [d for d in pair_sides if in_h[edges[d]]]
    if len(held) != 1:
        return SquareClass.PLAIN, None
    d_in = held[0]
    d_out = (d_in + 2) % 4
    kind = tab.rises[s][d_in]
    return SquareClass.CRITICAL, CriticalInfo(d_in, d_out, edges[d_in], edges[d_out], kind)


@dataclass
class BoundarySet:
    faces: frozenset[int]  # face ids incident to two or more cycles
    squares: dict[int, SquareClass]  # square number -> class
    critical: dict[int, CriticalInfo]

    def of_class(self, cls: SquareClass) -> list[int]:
        return sorted(s for s, c in self.squares.items() if c is cls)


def boundary_face_ids(g: GridGraph, cycle_of: list[int]) -> frozenset[int]:
    out = set()
    for f in g.faces.faces:
        if f.kind is FaceKind.OUTER and not f.boundary:
            continue
        seen = {cycle_of[u] for u, _ in f.boundary}
        if len(seen) > 1:
            out.add(f.index)
    return frozenset(out)


def boundary_faces(h: CycleCover) -> BoundarySet:
    g = h.g
    tab = g.squares
    cyc = h.cycle_of
    in_h = h.in_h
    squares: dict[int, SquareClass] = {}
    critical: dict[int, CriticalInfo] = {}
    for s in range(len(tab)):
        cls, info = classify_square(tab, s, in_h, cyc)
        if cls is None:
            continue
        squares[s] = cls
        if info is not None:
            critical[s] = info
    return BoundarySet(boundary_face_ids(g, cyc), squares, critical)
