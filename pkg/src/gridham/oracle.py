"""Brute-force ground truth for small instances.

Nothing here uses the height-function machinery except where a check is
explicitly about it (signatures, height enumeration). Covers are stored as
integer bitmasks over the edge list.
"""

from __future__ import annotations

import math
import sys
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .chains import DifferenceSystem
from .grid import GridGraph

DEFAULT_CAP = 60


class CapExceeded(Exception):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


def enumerate_cover_masks(g: GridGraph, cap: int | None = DEFAULT_CAP) -> list[int]:
    """Every 2-factor of g as an edge bitmask, sorted ascending.

    Edges are decided in row-major order (horizontal before vertical); a
    vertex is closed once all its edges are decided, so degree checks prune
    early.
    """
    m = len(g.edges)
    if cap is not None and m > cap:
        raise CapExceeded(f"{m} edges exceed the cap of {cap}")
    nv = len(g.points)
    if nv == 0:
        return []
    remaining = [0] * nv
    for a, b in g.edges:
        remaining[a] += 1
        remaining[b] += 1
    deg = [0] * nv
    out: list[int] = []
    edges = g.edges

    def go(i: int, mask: int) -> None:
        if i == m:
            out.append(mask)
            return
        a, b = edges[i]
        remaining[a] -= 1
        remaining[b] -= 1
        # take the edge
        if deg[a] < 2 and deg[b] < 2:
            deg[a] += 1
            deg[b] += 1
            if deg[a] + remaining[a] >= 2 and deg[b] + remaining[b] >= 2:
                go(i + 1, mask | (1 << i))
            deg[a] -= 1
            deg[b] -= 1
        # skip the edge
        if deg[a] + remaining[a] >= 2 and deg[b] + remaining[b] >= 2:
            go(i + 1, mask)
        remaining[a] += 1
        remaining[b] += 1

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * m + 100))
    try:
        go(0, 0)
    finally:
        sys.setrecursionlimit(old)
    return sorted(out)


def count_cycles(g: GridGraph, mask: int) -> int:
    """Number of cycles of a 2-factor, by union-find (independent of CycleCover)."""
    parent = list(range(len(g.points)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(g.points)
    e = 0
    while mask:
        if mask & 1:
            a, b = g.edges[e]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        mask >>= 1
        e += 1
    return comps


def square_masks(g: GridGraph) -> list[int]:
    tab = g.squares
    out = []
    for s in range(len(tab)):
        m = 0
        for e in tab.edge[s]:
            m |= 1 << e
        out.append(m)
    return out


@dataclass
class CoverCatalog:
    g: GridGraph
    masks: list[int]
    p: list[int] = field(init=False)

    def __post_init__(self):
        self.p = [count_cycles(self.g, m) for m in self.masks]
        self.position = {m: i for i, m in enumerate(self.masks)}

    def __len__(self) -> int:
        return len(self.masks)

    @cached_property
    def signatures(self) -> list[tuple[int, ...]]:
        from .cover import CycleCover
        from .height import signature

        return [signature(CycleCover.from_mask(self.g, m)) for m in self.masks]

    @cached_property
    def z_adjacency(self) -> list[list[int]]:
        sq = square_masks(self.g)
        adj = []
        for m in self.masks:
            row = []
            for s, sm in enumerate(sq):
                # a Z-move flips the four sides of a square whose sides alternate in H
                if _popcount(m & sm) == 2:
                    j = self.position.get(m ^ sm)
                    if j is not None:
                        row.append(j)
            adj.append(row)
        return adj

    def covers(self):
        from .cover import CycleCover

        return [CycleCover.from_mask(self.g, m) for m in self.masks]

    def dump(self) -> str:
        """Header plus one hex edge bitset per line."""
        lines = [f"; covers={len(self.masks)} edges={len(self.g.edges)} vertices={len(self.g.points)}"]
        lines += [f"{m:x}" for m in self.masks]
        return "\n".join(lines) + "\n"


def enumerate_covers(g: GridGraph, cap: int | None = DEFAULT_CAP) -> CoverCatalog:
    return CoverCatalog(g, enumerate_cover_masks(g, cap))


@dataclass
class ZComponents:
    labels: list[int]
    count: int
    distances: np.ndarray | None  # BFS distance matrix (inf across components)

    def members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for i, c in enumerate(self.labels):
            out[c].append(i)
        return out


def _adjacency_matrix(n: int, adj: list[list[int]]) -> csr_matrix:
    rows = [i for i, r in enumerate(adj) for _ in r]
    cols = [j for r in adj for j in r]
    return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def z_components(cat: CoverCatalog, distances: bool = True) -> ZComponents:
    n = len(cat)
    if n == 0:
        return ZComponents([], 0, None)
    mat = _adjacency_matrix(n, cat.z_adjacency)
    count, labels = connected_components(mat, directed=False)
    # relabel by first appearance for determinism
    remap: dict[int, int] = {}
    lab = [remap.setdefault(int(x), len(remap)) for x in labels]
    dist = shortest_path(mat, unweighted=True, directed=False) if distances else None
    return ZComponents(lab, int(count), dist)


@dataclass
class MinCycles:
    overall: int | None
    per_component: dict[int, int]
    witness: int | None  # cover mask attaining the overall minimum


def min_cycles_bruteforce(cat: CoverCatalog, comps: ZComponents | None = None) -> MinCycles:
    if not cat.masks:
        return MinCycles(None, {}, None)
    comps = z_components(cat, distances=False) if comps is None else comps
    per: dict[int, int] = {}
    for i, c in enumerate(comps.labels):
        per[c] = min(per.get(c, cat.p[i]), cat.p[i])
    best = min(range(len(cat)), key=lambda i: (cat.p[i], i))
    return MinCycles(cat.p[best], per, cat.masks[best])


def min_cycles_by_signature(cat: CoverCatalog) -> dict[tuple[int, ...], int]:
    out: dict[tuple[int, ...], int] = {}
    for sig, p in zip(cat.signatures, cat.p):
        out[sig] = min(out.get(sig, p), p)
    return out


def find_hamiltonian_cycle(g: GridGraph) -> list[int] | None:
    """Plain backtracking over simple paths from vertex 0."""
    n = len(g.points)
    if n < 4 or not g.connected:
        return None
    nbrs = [[w for w in g.nbrs[v] if w >= 0] for v in range(n)]
    if any(len(x) < 2 for x in nbrs):
        return None
    on = [False] * n
    path = [0]
    on[0] = True
    start_nbrs = set(nbrs[0])

    def go(v: int) -> bool:
        if len(path) == n:
            return v in start_nbrs
        for w in nbrs[v]:
            if not on[w]:
                on[w] = True
                path.append(w)
                if go(w):
                    return True
                path.pop()
                on[w] = False
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 100))
    try:
        return list(path) if go(0) else None
    finally:
        sys.setrecursionlimit(old)


def count_hamiltonian_cycles(g: GridGraph, cap: int | None = DEFAULT_CAP) -> int:
    cat = enumerate_covers(g, cap)
    return sum(1 for p in cat.p if p == 1)


def enumerate_heights(sys: DifferenceSystem, bound: int) -> list[dict[Hashable, int]]:
    """Every integer field with tau(reference) = 0 and |tau| <= bound.

    Faces are assigned in order; each assignment narrows the interval of the
    later faces it is tied to.
    """
    faces = [sys.reference] + [f for f in sys.faces if f != sys.reference]
    pos = {f: i for i, f in enumerate(faces)}
    # constraints per face on earlier faces: tau(f) <= tau(a) + c  and  tau(f) >= tau(b) - c
    upper: list[list[tuple[int, int]]] = [[] for _ in faces]
    lower: list[list[tuple[int, int]]] = [[] for _ in faces]
    for (a, b), c in sys.arcs.items():
        ia, ib = pos[a], pos[b]
        if ia == ib:
            if c < 0:
                return []
            continue
        if ia < ib:
            upper[ib].append((ia, c))  # tau(b) <= tau(a) + c
        else:
            lower[ia].append((ib, c))  # tau(a) >= tau(b) - c
    out: list[dict[Hashable, int]] = []
    vals = [0] * len(faces)

    def go(i: int) -> None:
        if i == len(faces):
            out.append({f: vals[j] for j, f in enumerate(faces)})
            return
        lo, hi = -bound, bound
        if i == 0:
            lo = hi = 0
        for j, c in upper[i]:
            hi = min(hi, vals[j] + c)
        for j, c in lower[i]:
            lo = max(lo, vals[j] - c)
        for v in range(math.ceil(lo), math.floor(hi) + 1):
            vals[i] = v
            go(i + 1)

    go(0)
    return out


def stationary_check(
    g: GridGraph,
    steps: int,
    seed: int,
    component: tuple[int, ...] | None = None,
    thin: int = 50,
    broken: bool = False,
    cap: int | None = DEFAULT_CAP,
) -> "ChiSquare":
    """Chi-square of thinned chain visits against the uniform law on S1 u S2."""
    from scipy.stats import chi2

    from .cover import CycleCover
    from .sampler import MarkovChain

    cat = enumerate_covers(g, cap)
    states = [
        m
        for m, p, sig in zip(cat.masks, cat.p, cat.signatures)
        if p <= 2 and (component is None or sig == component)
    ]
    if len(states) <= 1:
        return ChiSquare(0.0, 0, 1.0, len(states), 0)
    start = CycleCover.from_mask(g, states[0])
    chain = MarkovChain(start, seed=seed, broken=broken)
    index = {m: i for i, m in enumerate(states)}
    counts = np.zeros(len(states), dtype=np.int64)
    for k in range(steps):
        chain.step()
        if k % thin == thin - 1:
            counts[index[chain.mask]] += 1
    total = counts.sum()
    expected = total / len(states)
    stat = float(((counts - expected) ** 2 / expected).sum())
    dof = len(states) - 1
    return ChiSquare(stat, dof, float(chi2.sf(stat, dof)), len(states), int(total))


@dataclass
class ChiSquare:
    statistic: float
    dof: int
    p_value: float
    states: int
    samples: int


def transition_matrix(g: GridGraph, masks: list[int], broken: bool = False) -> np.ndarray:
    """Explicit transition probabilities of the sampler on the given states."""
    from .sampler import MoveTable

    table = MoveTable(g)
    index = {m: i for i, m in enumerate(masks)}
    n = len(masks)
    mat = np.zeros((n, n))
    nsq = len(g.squares)
    for i, m in enumerate(masks):
        targets = [table.target(m, s) for s in range(nsq)]
        if broken:
            moving = [t for t in targets if t != m]
            if not moving:
                mat[i, i] = 1.0
                continue
            for t in moving:
                mat[i, index[t]] += 1.0 / len(moving)
        else:
            for t in targets:
                mat[i, index[t]] += 1.0 / nsq
    return mat


def bfs_layers(adj: Mapping[int, Iterable[int]], src: int) -> dict[int, int]:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if b not in dist:
                dist[b] = dist[a] + 1
                queue.append(b)
    return dist
