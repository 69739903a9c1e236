"""Doubled integer height functions of cycle covers on grid graphs.

Crossing an edge from the face on the right of its black -> white dart to the
face on its left, tau goes up by one if the edge is not in H and down by one
if it is. Around an interior vertex these steps cancel. Around a vertex of
degree less than four they do not, so every non-square face is cut into one
triangle per boundary dart, and the step between consecutive triangles at a
vertex v carries the missing amount eps(v) * (4 - deg v). That amount is put
on the first non-square occurrence of v (outer face first, then holes in face
order), which makes the triangle values H-independent.

With holes the potential is multivalued. Values are integrated along a fixed
BFS spanning tree of the dual, rooted at a canonical outer triangle; a hole's
value is the value at its canonical triangle, and the vector of hole values is
the component signature.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .cover import CycleCover
from .grid import E, N, S, W, DIRECTION_NAMES, GridGraph, sign


class NotExtremal(ValueError):
    pass


class RowInvalidated(ValueError):
    pass


MAX, MIN = 1, -1


def _canonical_dart(g: GridGraph, darts: Sequence[tuple[int, int]]) -> int:
    """Index of the dart leaving the least (x, y) vertex, E before N, W, S."""
    pts = g.points

    def key(i: int):
        u, v = darts[i]
        d = (pts[v].x - pts[u].x, pts[v].y - pts[u].y)
        return (pts[u].x, pts[u].y, [(1, 0), (0, 1), (-1, 0), (0, -1)].index(d))

    return min(range(len(darts)), key=key)


class DualFrame:
    """Dual nodes, the integration tree, and per-graph constants."""

    def __init__(self, g: GridGraph):
        self.g = g
        fs = g.faces
        tab = g.squares
        self.nsq = len(tab)
        # triangles of non-square faces
        self.tri_faces = [fs.outer] + list(fs.holes)
        self.tri_base: dict[int, int] = {}
        self.tri_start: dict[int, int] = {}
        node = self.nsq
        for f in self.tri_faces:
            self.tri_base[f] = node
            darts = fs.faces[f].boundary
            self.tri_start[f] = _canonical_dart(g, darts) if darts else 0
            node += len(darts)
        self.n = node
        self.node_face = list(tab.face_of) + [
            f for f in self.tri_faces for _ in fs.faces[f].boundary
        ]

        dart_pos: dict[tuple[int, int], int] = {}
        for f in self.tri_faces:
            for i, d in enumerate(fs.faces[f].boundary):
                dart_pos[d] = self.tri_base[f] + i
        self.dart_pos = dart_pos

        def node_right_of(u: int, v: int) -> int:
            """Dual node on the right of the dart u -> v."""
            f = fs.dart_face[(u, v)]
            sq = tab.square_of_face.get(f)
            return sq if sq is not None else dart_pos[(u, v)]

        self.node_right_of = node_right_of

        # adjacency: (other, edge id or -1, sign or offset)
        # crossing edge step: tau(to) - tau(from) = sgn * (1 - 2[e in H])
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.n)]
        for eid, (b, w) in enumerate(g.edges):
            r = node_right_of(b, w)
            l = node_right_of(w, b)
            if r == l:
                continue
            adj[r].append((l, eid, 1))
            adj[l].append((r, eid, -1))
        seen_vertex: set[int] = set()
        for f in self.tri_faces:
            darts = fs.faces[f].boundary
            k = len(darts)
            base = self.tri_base[f]
            for i in range(k):
                v = darts[i][1]
                off = 0
                if v not in seen_vertex:
                    seen_vertex.add(v)
                    off = sign(g.points[v]) * (4 - g.degree(v))
                a, b = base + i, base + (i + 1) % k
                if a == b:
                    continue
                adj[a].append((b, -1, off))
                adj[b].append((a, -1, -off))
        self.adj = adj

        # spanning tree: a newly reached non-square face is filled along its
        # ring of triangles before the search continues
        root = self.tri_base[fs.outer] + self.tri_start[fs.outer] if self.n > self.nsq else 0
        self.root = root
        parent = [-2] * self.n
        pedge = [0] * self.n
        pval = [0] * self.n
        order: list[int] = []
        parent[root] = -1
        queue = deque()

        def reach(x: int):
            order.append(x)
            queue.append(x)
            if x >= self.nsq:
                f = self.node_face[x]
                base = self.tri_base[f]
                k = len(fs.faces[f].boundary)
                i = x - base
                for step in range(1, k):
                    a = base + (i + step - 1) % k
                    b = base + (i + step) % k
                    if parent[b] != -2:
                        break
                    off = next(o for (t, e, o) in adj[a] if t == b and e < 0)
                    parent[b], pedge[b], pval[b] = a, -1, off
                    order.append(b)
                    queue.append(b)

        reach(root)
        while queue:
            a = queue.popleft()
            for b, eid, val in adj[a]:
                if parent[b] == -2:
                    parent[b], pedge[b], pval[b] = a, eid, val
                    reach(b)
        if len(order) != self.n:
            raise AssertionError("dual graph is disconnected")
        self.order = order
        self.parent = parent
        self.pedge = pedge
        self.pval = pval
        self._defects: dict[tuple[int, int], int] | None = None
        # canonical triangle of each hole
        self.hole_nodes = [self.tri_base[h] + self.tri_start[h] for h in fs.holes]

    def integrate(self, in_h) -> list[int]:
        tau = [0] * self.n
        parent, pedge, pval = self.parent, self.pedge, self.pval
        for x in self.order[1:]:
            e = pedge[x]
            if e < 0:
                tau[x] = tau[parent[x]] + pval[x]
            else:
                tau[x] = tau[parent[x]] + (pval[x] if not in_h[e] else -pval[x])
        return tau

    def local_step(self, a: int, b: int, eid: int, val: int, in_h) -> int:
        if eid < 0:
            return val
        return val if not in_h[eid] else -val

    def defects(self, tau: list[int], in_h) -> dict[tuple[int, int], int]:
        """Integrated minus local step on every dual edge (H-independent)."""
        if self._defects is None:
            out = {}
            for a in range(self.n):
                for b, eid, val in self.adj[a]:
                    diff = tau[b] - tau[a] - self.local_step(a, b, eid, val, in_h)
                    if diff:
                        out[(a, b)] = diff
            self._defects = out
        return self._defects


def frame_of(g: GridGraph) -> DualFrame:
    fr = g.__dict__.get("_dual_frame")
    if fr is None:
        fr = DualFrame(g)
        g.__dict__["_dual_frame"] = fr
    return fr


@dataclass
class HeightField:
    """Doubled height values on squares and triangles of non-square faces."""

    g: GridGraph
    nodes: list[int]
    defects: dict[tuple[int, int], int] = field(repr=False)

    @cached_property
    def frame(self) -> DualFrame:
        return frame_of(self.g)

    @property
    def squares(self) -> list[int]:
        """Values on squares, indexed by square number."""
        return self.nodes[: self.frame.nsq]

    def square_value(self, s: int) -> int:
        return self.nodes[s]

    @property
    def face_values(self) -> dict[int, int]:
        """Square face id -> value."""
        tab = self.g.squares
        return {tab.face_of[s]: v for s, v in enumerate(self.squares)}

    @property
    def boundary_values(self) -> dict[tuple[int, int], int]:
        """Outer-face dart -> value of its triangle."""
        fr = self.frame
        fs = self.g.faces
        return {d: self.nodes[fr.dart_pos[d]] for d in fs.faces[fs.outer].boundary}

    @property
    def hole_values(self) -> tuple[int, ...]:
        return tuple(self.nodes[x] for x in self.frame.hole_nodes)

    def negated(self) -> "HeightField":
        return HeightField(self.g, [-x for x in self.nodes], {k: -v for k, v in self.defects.items()})

    def step(self, a: int, b: int) -> int:
        """Local difference tau(b) - tau(a) across a dual edge."""
        return self.nodes[b] - self.nodes[a] - self.defects.get((a, b), 0)


def height_of(h: CycleCover) -> HeightField:
    fr = frame_of(h.g)
    in_h = h.in_h
    tau = fr.integrate(in_h)
    return HeightField(h.g, tau, fr.defects(tau, in_h))


def signature(h: CycleCover) -> tuple[int, ...]:
    return height_of(h).hole_values


def local_extrema(fld: HeightField) -> tuple[list[int], list[int]]:
    """Square numbers that are strict local maxima / minima."""
    fr = fld.frame
    maxima, minima = [], []
    for s in range(fr.nsq):
        steps = [fld.step(s, b) for b, _, _ in fr.adj[s]]
        if all(x < 0 for x in steps):
            maxima.append(s)
        elif all(x > 0 for x in steps):
            minima.append(s)
    return maxima, minima


# --- fast square-level primitives shared with the search and the sampler ---


def up(tab, in_h, s: int, d: int) -> bool:
    """Is the face across side d of square s higher than s?"""
    return (tab.rises[s][d] > 0) != bool(in_h[tab.edge[s][d]])


def extremal_kind(tab, in_h, s: int) -> int:
    """MAX if s is above all four neighbours, MIN if below all, else 0."""
    rises, edge = tab.rises[s], tab.edge[s]
    ups = 0
    for d in range(4):
        if (rises[d] > 0) != bool(in_h[edge[d]]):
            ups += 1
    if ups == 0:
        return MAX
    if ups == 4:
        return MIN
    return 0


def toggle_square(tab, in_h, s: int) -> None:
    for e in tab.edge[s]:
        in_h[e] ^= 1


@dataclass(frozen=True)
class RowRef:
    start: int  # square number of f0
    direction: int  # E, N, W or S; -1 for a single extremal square
    squares: tuple[int, ...]
    kind: int  # MAX rows get lowered, MIN rows raised

    @property
    def length(self) -> int:
        return len(self.squares)

    @property
    def odd(self) -> bool:
        return len(self.squares) % 2 == 1

    def describe(self, g: GridGraph) -> dict:
        tab = g.squares
        return {
            "start": list(tab.cells[self.start]),
            "direction": DIRECTION_NAMES[self.direction] if self.direction >= 0 else None,
            "length": self.length,
            "kind": "max" if self.kind == MAX else "min",
        }


@dataclass(frozen=True)
class Stuck:
    start: int
    squares: tuple[int, ...]
    blocker: int  # square number or -1 - face id of the higher face that blocks


def trace_row(tab, in_h, s: int, boundary=None) -> RowRef | Stuck | None:
    """The row beginning at square s, if s is above (below) three or four neighbours.

    With ``boundary`` (a predicate on square numbers) the walk treats a
    boundary square ahead as a blocker, as for critical squares; without it
    only non-square faces block.
    """
    rises, edge = tab.rises[s], tab.edge[s]
    ups = [(rises[d] > 0) != bool(in_h[edge[d]]) for d in range(4)]
    n = sum(ups)
    if n == 0:
        return RowRef(s, -1, (s,), MAX)
    if n == 4:
        return RowRef(s, -1, (s,), MIN)
    if n == 1:
        kind, d = MAX, ups.index(True)
    elif n == 3:
        kind, d = MIN, ups.index(False)
    else:
        return None
    squares = [s]
    cur = s
    while True:
        ahead_up = (tab.rises[cur][d] > 0) != bool(in_h[tab.edge[cur][d]])
        if ahead_up != (kind == MAX):
            return RowRef(s, d, tuple(squares), kind)
        nxt = tab.across[cur][d]
        if nxt < 0 or (boundary is not None and boundary(nxt)):
            return Stuck(s, tuple(squares), nxt)
        squares.append(nxt)
        cur = nxt


def row_is_valid(tab, in_h, row: RowRef) -> bool:
    """Each square above (below) every neighbour off the row, consecutive ones ordered."""
    sq = row.squares
    for i, s in enumerate(sq):
        for d in range(4):
            other = tab.across[s][d]
            if (i > 0 and other == sq[i - 1]) or (i + 1 < len(sq) and other == sq[i + 1]):
                continue
            if up(tab, in_h, s, d) == (row.kind == MAX):
                return False
        if i + 1 < len(sq) and up(tab, in_h, s, row.direction) != (row.kind == MAX):
            return False
    return True


def apply_row(tab, in_h, squares: Sequence[int]) -> None:
    """Z-moves at the far end first; each square must be extremal when moved."""
    for s in reversed(squares):
        if not extremal_kind(tab, in_h, s):
            raise RowInvalidated(f"square {tab.cells[s]} is not extremal")
        toggle_square(tab, in_h, s)


# --- public wrappers on CycleCover values ---


def _square_number(g: GridGraph, f) -> int:
    """Accept a square number, a face id via ('face', id), or a cell (x, y)."""
    tab = g.squares
    if isinstance(f, tuple):
        return tab.number[tuple(f)]
    return f


def z_transform(h: CycleCover, f) -> CycleCover:
    g = h.g
    tab = g.squares
    s = _square_number(g, f)
    if not extremal_kind(tab, h.in_h, s):
        raise NotExtremal(f"square {tab.cells[s]} is neither a local maximum nor minimum")
    return h.toggled(tab.edge[s])


def row_from(h: CycleCover, f) -> RowRef | Stuck | None:
    g = h.g
    return trace_row(g.squares, h.in_h, _square_number(g, f))


def maximal_row_from(h: CycleCover, f0) -> RowRef | Stuck:
    """Row from a critical square, blocked by boundary squares and non-squares."""
    g = h.g
    tab = g.squares
    s = _square_number(g, f0)
    cyc = h.cycle_of

    def on_boundary(x: int) -> bool:
        return len({cyc[v] for v in tab.corners[x]}) > 1

    res = trace_row(tab, h.in_h, s, boundary=on_boundary)
    if res is None:
        raise ValueError(f"square {tab.cells[s]} does not start a row")
    return res


def move_row(h: CycleCover, row: RowRef) -> CycleCover:
    tab = h.g.squares
    in_h = bytearray(h.in_h)
    if not row_is_valid(tab, in_h, row):
        raise RowInvalidated("row is not maximal (minimal) in this cover")
    apply_row(tab, in_h, row.squares)
    return CycleCover(h.g, (e for e in range(len(in_h)) if in_h[e]), check=False)


# --- rendering ---

_BOX = {
    (False, False, False, False): " ",
    (True, False, True, False): "─",
    (False, True, False, True): "│",
    (True, True, False, False): "└",
    (False, True, True, False): "┘",
    (False, False, True, True): "┐",
    (True, False, False, True): "┌",
}


def render_ascii(h: CycleCover, labels: bool = True) -> str:
    """Cycles drawn with box characters, squares labelled with tau."""
    g = h.g
    tab = g.squares
    fld = height_of(h) if labels else None
    xs = [p.x for p in g.points]
    ys = [p.y for p in g.points]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    width = 4
    lines = []
    for y in range(y1, y0 - 1, -1):
        row = []
        for x in range(x0, x1 + 1):
            v = g.index.get((x, y))
            if v is None:
                row.append(" " + " " * (width - 1))
                continue
            arms = []
            for d in (E, N, W, S):
                e = g.vertex_edges[v][d]
                arms.append(e >= 0 and e in h.edges)
            row.append(_BOX.get(tuple(arms), "+"))
            e = g.vertex_edges[v][E]
            row.append(("─" if e in h.edges else " ") * (width - 1) if e >= 0 else " " * (width - 1))
        lines.append("".join(row).rstrip())
        if y == y0:
            break
        row = []
        for x in range(x0, x1 + 1):
            v = g.index.get((x, y))
            e = g.vertex_edges[v][S] if v is not None else -1
            row.append("│" if e >= 0 and e in h.edges else " ")
            s = tab.number.get((x, y - 1))
            text = f"{fld.nodes[s]:^{width - 1}}" if (fld is not None and s is not None) else " " * (width - 1)
            row.append(text)
        lines.append("".join(row).rstrip())
    return "\n".join(lines) + "\n"
