"""Chains on a planar grid graph, boundary maps, and difference systems.

Chains are sparse dicts:

* 0-chains map vertex ids to coefficients,
* 1-chains map edge ids to the coefficient of the edge oriented black -> white
  (the reverse orientation carries the negated value),
* 2-chains map face ids to values (read as functions on faces).

A :class:`DifferenceSystem` holds restrictions ``tau(b) - tau(a) <= cost(a, b)``
between adjacent faces. Feasibility is decided by looking for negative
cycles; extremal solutions are shortest-path distances.
"""

from __future__ import annotations

import enum
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .grid import FaceKind, GridGraph, sign

Number = int | Fraction
Chain0 = dict[int, Number]
Chain1 = dict[int, Number]
Chain2 = dict[Hashable, Number]


class InfeasibleSystem(Exception):
    """No height function satisfies the restrictions."""


class NegativeCycleFound(InfeasibleSystem):
    def __init__(self, cycle: list):
        super().__init__(f"negative cycle through {len(cycle) - 1} faces")
        self.cycle = cycle


class Unreachable(Exception):
    pass


class DifferentComponent(Exception):
    pass


class EmptySpace(Exception):
    pass


def _clean(chain: dict) -> dict:
    return {k: v for k, v in chain.items() if v != 0}


def oriented(g: GridGraph, chain: Chain1, u: int, v: int) -> Number:
    """Coefficient of the oriented edge u -> v."""
    eid = g.edge_id(u, v)
    value = chain.get(eid, 0)
    return value if g.edges[eid][0] == u else -value


def edge_chain(g: GridGraph, u: int, v: int, coeff: Number = 1) -> Chain1:
    eid = g.edge_id(u, v)
    return {eid: coeff if g.edges[eid][0] == u else -coeff}


def boundary1(g: GridGraph, chain: Chain1) -> Chain0:
    """d(e) = w - v for an edge e running from v to w."""
    out: dict[int, Number] = defaultdict(int)
    for eid, a in chain.items():
        b, w = g.edges[eid]
        out[w] += a
        out[b] -= a
    return _clean(out)


def boundary2(g: GridGraph, chain: Chain2) -> Chain1:
    """Sum of the clockwise boundaries of the faces, weighted by the chain."""
    fs = g.faces
    out: dict[int, Number] = defaultdict(int)
    for f, a in chain.items():
        if not a:
            continue
        for u, v in fs.faces[f].boundary:
            eid = g.edge_id(u, v)
            out[eid] += a if g.edges[eid][0] == u else -a
    return _clean(out)


def vertex_charge(g: GridGraph, phi: Mapping[int, int] | int = 2) -> Chain0:
    """The 0-chain d(omega_H) of any H with degrees phi.

    Edges of H leave black vertices, so with d(e) = w - v this is
    -sum phi(v) eps(v) v: black vertices get -phi, white ones +phi.
    """
    if isinstance(phi, int):
        return {v: -phi * sign(p) for v, p in enumerate(g.points)}
    return _clean({v: -phi[v] * sign(g.points[v]) for v in range(len(g.points))})


def homology_dimension(g: GridGraph, punctured: bool = False) -> int:
    """2 - |F| + |E| - |V|; zero for any plane graph.

    With ``punctured=True`` the holes are not counted as faces, which gives
    the dimension for the plane with the holes cut out (the hole count).
    """
    fs = g.faces
    nf = len(fs.faces) - (len(fs.holes) if punctured else 0)
    return 2 - nf + len(g.edges) - len(g.points)


class Direction(enum.Enum):
    MAX = "max"
    MIN = "min"


@dataclass
class DifferenceSystem:
    """Restrictions tau(b) - tau(a) <= arcs[(a, b)] on a set of faces."""

    faces: list[Hashable]
    arcs: dict[tuple[Hashable, Hashable], Number] = field(default_factory=dict)
    reference: Hashable | None = None

    def __post_init__(self):
        if self.reference is None and self.faces:
            self.reference = self.faces[0]

    def add(self, a: Hashable, b: Hashable, cost: Number) -> None:
        """Tighten the restriction on tau(b) - tau(a)."""
        key = (a, b)
        old = self.arcs.get(key)
        if old is None or cost < old:
            self.arcs[key] = cost

    def restrict(self, a: Hashable, b: Hashable, low: Number, high: Number) -> None:
        """low <= tau(b) - tau(a) <= high."""
        self.add(a, b, high)
        self.add(b, a, -low)

    def pin(self, face: Hashable, value: Number, base: Hashable | None = None) -> "DifferenceSystem":
        """Copy of the system with tau(face) - tau(base) fixed to value."""
        base = self.reference if base is None else base
        out = DifferenceSystem(list(self.faces), dict(self.arcs), self.reference)
        out.restrict(base, face, value, value)
        return out

    def out_arcs(self) -> dict[Hashable, list[tuple[Hashable, Number]]]:
        adj: dict[Hashable, list[tuple[Hashable, Number]]] = {f: [] for f in self.faces}
        for (a, b), c in self.arcs.items():
            adj[a].append((b, c))
        return adj

    def in_arcs(self) -> dict[Hashable, list[tuple[Hashable, Number]]]:
        adj: dict[Hashable, list[tuple[Hashable, Number]]] = {f: [] for f in self.faces}
        for (a, b), c in self.arcs.items():
            adj[b].append((a, c))
        return adj

    def max_interval(self) -> Number:
        """Largest width of an allowed difference interval (the M of the bound |F|M)."""
        best = 0
        for (a, b), c in self.arcs.items():
            back = self.arcs.get((b, a))
            if back is not None:
                best = max(best, c + back)
            else:
                best = max(best, abs(c))
        return best

    def satisfied_by(self, tau: Mapping[Hashable, Number]) -> bool:
        return all(tau[b] - tau[a] <= c for (a, b), c in self.arcs.items())

    def slack(self, tau: Mapping[Hashable, Number], a: Hashable, b: Hashable) -> Number:
        return self.arcs[(a, b)] - (tau[b] - tau[a])


def _bellman_ford(
    faces: Sequence[Hashable],
    adj: Mapping[Hashable, list[tuple[Hashable, Number]]],
    sources: Iterable[Hashable],
) -> dict[Hashable, Number]:
    """Queue-based label correcting; raises NegativeCycleFound with a witness.

    A shortest path using n or more arcs repeats a face, so it closes a
    negative cycle. Counting relaxations instead is not sound.
    """
    dist: dict[Hashable, Number] = {}
    arcs: dict[Hashable, int] = {}
    queue: deque = deque()
    queued = set()
    for s in sources:
        dist[s] = 0
        arcs[s] = 0
        queue.append(s)
        queued.add(s)
    n = len(faces)
    while queue:
        a = queue.popleft()
        queued.discard(a)
        da = dist[a]
        for b, c in adj[a]:
            nd = da + c
            if b not in dist or nd < dist[b]:
                dist[b] = nd
                arcs[b] = arcs[a] + 1
                if arcs[b] >= n:
                    raise NegativeCycleFound(_witness_cycle(faces, adj))
                if b not in queued:
                    queue.append(b)
                    queued.add(b)
    return dist


def _witness_cycle(faces: Sequence[Hashable], adj: Mapping[Hashable, list[tuple[Hashable, Number]]]) -> list:
    """A negative cycle by plain passes from a virtual source at distance 0.

    The queue-based search only knows a cycle exists; its predecessor
    pointers may be stale.
    """
    dist: dict[Hashable, Number] = {f: 0 for f in faces}
    pred: dict[Hashable, Hashable] = {}
    last = None
    for _ in range(len(faces)):
        last = None
        for a in faces:
            for b, c in adj[a]:
                if dist[a] + c < dist[b]:
                    dist[b] = dist[a] + c
                    pred[b] = a
                    last = b
        if last is None:
            raise AssertionError("no negative cycle to extract")
    return _extract_cycle(pred, last, len(faces))


def _extract_cycle(pred: Mapping, start: Hashable, n: int) -> list:
    v = start
    for _ in range(n + 1):
        v = pred[v]
    cycle = [v]
    u = pred[v]
    while u != v:
        cycle.append(u)
        u = pred[u]
    cycle.append(v)
    cycle.reverse()
    return cycle


def cycle_cost(sys: DifferenceSystem, path: Sequence[Hashable]) -> Number:
    return sum(sys.arcs[(a, b)] for a, b in zip(path, path[1:]))


def single_source(sys: DifferenceSystem, source: Hashable, reverse: bool = False) -> dict[Hashable, Number]:
    """D(source, f) for every reachable f (D(f, source) with reverse=True)."""
    adj = sys.in_arcs() if reverse else sys.out_arcs()
    return _bellman_ford(sys.faces, adj, [source])


def shortest_distance(sys: DifferenceSystem, f1: Hashable, f2: Hashable) -> Number:
    dist = single_source(sys, f1)
    if f2 not in dist:
        raise Unreachable(f"no path from {f1!r} to {f2!r}")
    return dist[f2]


def exists_height(sys: DifferenceSystem) -> bool:
    try:
        _bellman_ford(sys.faces, sys.out_arcs(), sys.faces)
    except NegativeCycleFound:
        return False
    return True


def negative_cycle(sys: DifferenceSystem) -> list | None:
    try:
        _bellman_ford(sys.faces, sys.out_arcs(), sys.faces)
    except NegativeCycleFound as exc:
        return exc.cycle
    return None


def extremal_height(sys: DifferenceSystem, f0: Hashable | None = None, direction: Direction = Direction.MAX) -> Chain2:
    """The pointwise largest (smallest) valid field with tau(f0) = 0."""
    f0 = sys.reference if f0 is None else f0
    if not exists_height(sys):
        raise InfeasibleSystem("the restrictions contain a negative cycle")
    if direction is Direction.MAX:
        dist = single_source(sys, f0)
        tau = dict(dist)
    else:
        dist = single_source(sys, f0, reverse=True)
        tau = {f: -d for f, d in dist.items()}
    missing = [f for f in sys.faces if f not in tau]
    if missing:
        raise Unreachable(f"faces not connected to the reference: {missing[:5]}")
    return tau


def all_pairs(sys: DifferenceSystem) -> dict[Hashable, dict[Hashable, Number]]:
    if not exists_height(sys):
        raise InfeasibleSystem("the restrictions contain a negative cycle")
    adj = sys.out_arcs()
    return {f: _bellman_ford(sys.faces, adj, [f]) for f in sys.faces}


@dataclass
class FaceClusterPartition:
    clusters: list[list[Hashable]]
    cluster_of: dict[Hashable, int]
    offsets: dict[Hashable, Number]  # D(representative, f) inside each cluster
    distances: dict[Hashable, dict[Hashable, Number]]

    def same(self, a: Hashable, b: Hashable) -> bool:
        return self.cluster_of[a] == self.cluster_of[b]

    def pinned(self) -> list[list[Hashable]]:
        return [c for c in self.clusters if len(c) > 1]


def face_clusters(sys: DifferenceSystem) -> FaceClusterPartition:
    dist = all_pairs(sys)
    cluster_of: dict[Hashable, int] = {}
    clusters: list[list[Hashable]] = []
    offsets: dict[Hashable, Number] = {}
    for f in sys.faces:
        if f in cluster_of:
            continue
        cid = len(clusters)
        members = [f]
        cluster_of[f] = cid
        offsets[f] = 0
        for g in sys.faces:
            if g in cluster_of:
                continue
            dfg = dist[f].get(g)
            dgf = dist[g].get(f)
            if dfg is not None and dgf is not None and dfg == -dgf:
                cluster_of[g] = cid
                members.append(g)
                offsets[g] = dfg
        clusters.append(members)
    return FaceClusterPartition(clusters, cluster_of, offsets, dist)


def connect_heights(
    sys: DifferenceSystem,
    tau1: Mapping[Hashable, Number],
    tau2: Mapping[Hashable, Number],
    clusters: FaceClusterPartition | None = None,
) -> list[tuple[Hashable, Number]]:
    """Single-face moves (face, change) turning tau1 into tau2.

    Each step works on a face of largest discrepancy. If that face cannot
    move, the blocking neighbour has at least the same discrepancy and is
    tried next; the chase cannot revisit a face because a zero-slack loop
    would put both fields' faces in a pinned cluster.
    """
    clusters = face_clusters(sys) if clusters is None else clusters
    for members in clusters.pinned():
        if any(tau1[f] != tau2[f] for f in members):
            raise DifferentComponent("fields differ on a pinned face cluster")
    if tau1[sys.reference] != tau2[sys.reference]:
        raise DifferentComponent("fields differ on the reference face")
    out_adj = sys.out_arcs()
    in_adj = sys.in_arcs()
    order = {f: i for i, f in enumerate(sys.faces)}
    tau = dict(tau1)
    moves: list[tuple[Hashable, Number]] = []
    while True:
        f = max(sys.faces, key=lambda x: (abs(tau[x] - tau2[x]), -order[x]))
        gap = tau[f] - tau2[f]
        if gap == 0:
            return moves
        down = gap > 0
        seen = {f}
        cur = f
        while True:
            if down:
                # lowering cur: tau(b) - tau(cur) <= d(cur, b) must survive
                arcs = [(sys.slack(tau, cur, b), b) for b, _ in out_adj[cur]]
            else:
                arcs = [(sys.slack(tau, a, cur), a) for a, _ in in_adj[cur]]
            room = min((s for s, _ in arcs), default=None)
            want = abs(tau[cur] - tau2[cur])
            if room is None or room > 0:
                step = want if room is None else min(room, want)
                assert step > 0
                delta = -step if down else step
                tau[cur] += delta
                moves.append((cur, delta))
                break
            blocker = min((b for s, b in arcs if s == 0), key=order.__getitem__)
            assert blocker not in seen, "height chase revisited a face"
            seen.add(blocker)
            cur = blocker


def subgraph_system(g: GridGraph, h0: Iterable[int]) -> DifferenceSystem:
    """Restrictions whose integer solutions are the subgraphs with h0's degrees.

    With alpha = omega_{H0}, tau(right) - tau(left) = omega_H(e) - omega_H0(e)
    across each edge oriented black -> white, so the allowed interval is
    [0, 1] off H0 and [-1, 0] on it. The outer face is the reference.
    """
    fs = g.faces
    h0 = set(h0)
    sys = DifferenceSystem(list(range(len(fs.faces))), reference=fs.outer)
    for eid, (b, w) in enumerate(g.edges):
        left, right = fs.left_right(b, w)
        if left == right:
            continue
        base = 1 if eid in h0 else 0
        sys.restrict(left, right, -base, 1 - base)
    return sys


def subgraph_from_height(g: GridGraph, h0: Iterable[int], tau: Mapping[int, Number]) -> frozenset[int]:
    """Inverse of :func:`subgraph_system`: the edge set encoded by tau."""
    fs = g.faces
    h0 = set(h0)
    out = set()
    for eid, (b, w) in enumerate(g.edges):
        left, right = fs.left_right(b, w)
        value = (1 if eid in h0 else 0) + tau[right] - tau[left]
        if value not in (0, 1):
            raise ValueError(f"height field gives flow {value} on edge {eid}")
        if value:
            out.add(eid)
    return frozenset(out)


def height_from_subgraph(g: GridGraph, h0: Iterable[int], h: Iterable[int]) -> dict[int, int]:
    """tau with d(tau) = omega_H - omega_H0 and tau(outer) = 0."""
    fs = g.faces
    h0, h = set(h0), set(h)
    tau = {fs.outer: 0}
    queue = deque([fs.outer])
    walls: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for eid, (b, w) in enumerate(g.edges):
        left, right = fs.left_right(b, w)
        diff = (eid in h) - (eid in h0)
        walls[left].append((right, diff))
        walls[right].append((left, -diff))
    while queue:
        f = queue.popleft()
        for other, diff in walls[f]:
            if other not in tau:
                tau[other] = tau[f] + diff
                queue.append(other)
            else:
                assert tau[other] == tau[f] + diff, "omega_H - omega_H0 is not exact"
    return tau


class EdgeStatus(enum.Enum):
    FREE = "free"
    FIXED_IN = "fixed_in"
    FIXED_OUT = "fixed_out"


def classify_edges(g: GridGraph, phi: Mapping[int, int] | int = 2) -> list[EdgeStatus]:
    """Free / fixed status of every edge over all subgraphs with degrees phi."""
    from .cover import degree_subgraph

    h0 = degree_subgraph(g, phi)
    if h0 is None:
        raise EmptySpace("no subgraph has the requested degrees")
    sys = subgraph_system(g, h0)
    part = face_clusters(sys)
    fs = g.faces
    out = []
    for eid, (b, w) in enumerate(g.edges):
        left, right = fs.left_right(b, w)
        if left != right and not part.same(left, right):
            out.append(EdgeStatus.FREE)
        else:
            out.append(EdgeStatus.FIXED_IN if eid in h0 else EdgeStatus.FIXED_OUT)
    return out


def max_edge_face_system_faces(g: GridGraph) -> list[int]:
    """Face ids in the order used by the systems above (squares, holes, outer)."""
    fs = g.faces
    return [f.index for f in fs.faces if f.kind is FaceKind.SQUARE] + fs.holes + [fs.outer]
