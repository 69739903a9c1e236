"""Grid graphs: induced subgraphs of the square lattice and their faces.

A grid graph is given by its vertex set; the edge set is every unit-distance
pair inside it. Faces are found with the usual rotation-system walk (around a
vertex the edges are ordered E, N, W, S), which yields clockwise boundaries
for bounded faces and keeps every face on the right-hand side of its darts.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import networkx as nx


class GridError(Exception):
    pass


class EmptyGraph(GridError):
    pass


class NotConnected(GridError):
    pass


class MaskParseError(GridError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Point(NamedTuple):
    x: int
    y: int


class Color(enum.Enum):
    BLACK = 1
    WHITE = -1


# Direction indices, counter-clockwise.
E, N, W, S = 0, 1, 2, 3
STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1))
DIRECTION_NAMES = "ENWS"


def color(v: tuple[int, int]) -> Color:
    return Color.BLACK if (v[0] + v[1]) % 2 == 0 else Color.WHITE


def sign(v: tuple[int, int]) -> int:
    """+1 on black vertices, -1 on white ones."""
    return 1 if (v[0] + v[1]) % 2 == 0 else -1


class FaceKind(enum.Enum):
    SQUARE = "square"
    HOLE = "hole"
    OUTER = "outer"


@dataclass(frozen=True)
class Face:
    index: int
    kind: FaceKind
    boundary: tuple[tuple[int, int], ...]  # darts (u, v) as vertex ids, face on the right
    cell: Point | None = None

    @property
    def is_square(self) -> bool:
        return self.kind is FaceKind.SQUARE


@dataclass
class FaceStructure:
    faces: list[Face]
    dart_face: dict[tuple[int, int], int]
    outer: int
    holes: list[int]
    squares: list[int]
    square_at: dict[Point, int] = field(default_factory=dict)

    @property
    def hole_count(self) -> int:
        return len(self.holes)

    def left_right(self, u: int, v: int) -> tuple[int, int]:
        """Faces to the left and right of the dart u -> v."""
        return self.dart_face[(v, u)], self.dart_face[(u, v)]


class GridGraph:
    """Induced subgraph of Z^2 on a finite vertex set. Immutable."""

    def __init__(self, vertices: Iterable[tuple[int, int]]):
        pts = {Point(int(x), int(y)) for x, y in vertices}
        # mask reading order: top row first, then left to right
        self.points: list[Point] = sorted(pts, key=lambda p: (-p.y, p.x))
        self.vertices = frozenset(self.points)
        self.index = {p: i for i, p in enumerate(self.points)}
        n = len(self.points)
        self.nbrs = [[-1, -1, -1, -1] for _ in range(n)]
        self.vertex_edges = [[-1, -1, -1, -1] for _ in range(n)]
        edges: list[tuple[int, int]] = []
        self.edge_index: dict[tuple[int, int], int] = {}
        for i, p in enumerate(self.points):
            for d, (dx, dy) in enumerate(STEPS):
                j = self.index.get(Point(p.x + dx, p.y + dy))
                if j is not None:
                    self.nbrs[i][d] = j
        # edge order: row-major by the lower/left endpoint, horizontal before vertical
        for i, p in enumerate(self.points):
            for d in (E, S):
                j = self.nbrs[i][d]
                if j < 0:
                    continue
                b, w = (i, j) if sign(p) > 0 else (j, i)
                eid = len(edges)
                edges.append((b, w))
                self.edge_index[(i, j)] = eid
                self.edge_index[(j, i)] = eid
                self.vertex_edges[i][d] = eid
                self.vertex_edges[j][(d + 2) % 4] = eid
        self.edges = edges
        self.connected = self._is_connected()

    def __repr__(self) -> str:
        return f"GridGraph(|V|={len(self.points)}, |E|={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GridGraph) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __len__(self) -> int:
        return len(self.points)

    def __reduce__(self):
        # caches hold closures; rebuild from the vertex set instead
        return (GridGraph, ([tuple(p) for p in self.points],))

    def degree(self, v: int) -> int:
        return sum(1 for j in self.nbrs[v] if j >= 0)

    def edge_points(self, eid: int) -> tuple[Point, Point]:
        b, w = self.edges[eid]
        return self.points[b], self.points[w]

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v)]

    def black_white_counts(self) -> tuple[int, int]:
        black = sum(1 for p in self.points if sign(p) > 0)
        return black, len(self.points) - black

    def _is_connected(self) -> bool:
        if not self.points:
            return False
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.nbrs[v]:
                if w >= 0 and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.points)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.points)))
        g.add_edges_from(self.edges)
        return g

    def normalized(self) -> "GridGraph":
        """Translate so that the smallest x and y coordinates are zero."""
        mx = min(p.x for p in self.points)
        my = min(p.y for p in self.points)
        return GridGraph((p.x - mx, p.y - my) for p in self.points)

    @cached_property
    def faces(self) -> FaceStructure:
        return build_faces(self)

    @cached_property
    def squares(self) -> "SquareTable":
        return SquareTable(self)

    @cached_property
    def two_connected(self) -> bool:
        return check_two_connected(self)


def parse_grid(mask: str) -> GridGraph:
    """Read a '#'/'.' mask. The first non-comment line is the top row."""
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(mask.split("\n"), start=1):
        line = raw.rstrip("\r")
        if line.startswith(";"):
            continue
        rows.append((lineno, line))
    while rows and not rows[-1][1].strip():
        rows.pop()
    pts = []
    height = len(rows)
    for r, (lineno, line) in enumerate(rows):
        for c, ch in enumerate(line):
            if ch == "#":
                pts.append((c, height - 1 - r))
            elif ch not in ". ":
                raise MaskParseError(f"unexpected character {ch!r}", lineno, c + 1)
    if not pts:
        raise EmptyGraph("mask contains no '#'")
    return GridGraph(pts)


def to_mask(g: GridGraph) -> str:
    xs = [p.x for p in g.points]
    ys = [p.y for p in g.points]
    x0, y0 = min(0, min(xs)), min(0, min(ys))
    lines = []
    for y in range(max(ys), y0 - 1, -1):
        lines.append(
            "".join("#" if (x, y) in g.vertices else "." for x in range(x0, max(xs) + 1))
        )
    return "\n".join(lines) + "\n"


def rect(width: int, height: int) -> GridGraph:
    """Solid block of width x height vertices."""
    return GridGraph((x, y) for x in range(width) for y in range(height))


def check_two_connected(g: GridGraph) -> bool:
    if len(g.points) < 3 or not g.connected:
        return False
    return nx.is_biconnected(g.to_networkx())


def _signed_area(points: list[Point], darts: list[tuple[int, int]]) -> int:
    twice = 0
    for u, v in darts:
        a, b = points[u], points[v]
        twice += a.x * b.y - b.x * a.y
    return twice


def build_faces(g: GridGraph) -> FaceStructure:
    if not g.connected:
        raise NotConnected("face structure needs a connected graph")
    pts = g.points
    dart_face: dict[tuple[int, int], int] = {}
    walks: list[list[tuple[int, int]]] = []
    for u in range(len(pts)):
        for d in range(4):
            v = g.nbrs[u][d]
            if v < 0 or (u, v) in dart_face:
                continue
            walk = []
            a, b = u, v
            fid = len(walks)
            while (a, b) not in dart_face:
                dart_face[(a, b)] = fid
                walk.append((a, b))
                back = _direction(pts[b], pts[a])
                for k in range(1, 5):
                    c = g.nbrs[b][(back + k) % 4]
                    if c >= 0:
                        break
                a, b = b, c
            walks.append(walk)
    if not walks:
        # a single vertex: one face, the outer one
        return FaceStructure([Face(0, FaceKind.OUTER, ())], {}, 0, [], [])
    areas = [_signed_area(pts, w) for w in walks]
    outer = max(range(len(walks)), key=lambda i: areas[i])
    faces: list[Face] = []
    holes: list[int] = []
    squares: list[int] = []
    square_at: dict[Point, int] = {}
    for fid, walk in enumerate(walks):
        if fid == outer:
            faces.append(Face(fid, FaceKind.OUTER, tuple(walk)))
        elif len(walk) == 4:
            cell = Point(min(pts[a].x for a, _ in walk), min(pts[a].y for a, _ in walk))
            faces.append(Face(fid, FaceKind.SQUARE, tuple(walk), cell))
            squares.append(fid)
            square_at[cell] = fid
        else:
            faces.append(Face(fid, FaceKind.HOLE, tuple(walk)))
            holes.append(fid)
    fs = FaceStructure(faces, dart_face, outer, holes, squares, square_at)
    assert len(pts) - len(g.edges) + len(faces) == 2, "Euler relation"
    return fs


def _direction(frm: Point, to: Point) -> int:
    return STEPS.index((to.x - frm.x, to.y - frm.y))


class SquareTable:
    """Flat per-square lookup arrays used by the inner loops.

    Squares are numbered 0..n-1 in row-major order of their cells. For square
    ``s`` and side ``d`` (E, N, W, S):

    * ``edge[s][d]``   edge id of that side
    * ``across[s][d]`` square number across that side, or ``-1 - face`` for a
      hole/outer face
    * ``rises[s][d]``  the sign s(d) such that crossing outward changes the
      doubled height by ``rises * (+1 if edge not in H else -1)``
    * ``corners[s]``   vertex ids (x,y), (x+1,y), (x+1,y+1), (x,y+1)
    """

    def __init__(self, g: GridGraph):
        fs = g.faces
        cells = sorted((fs.faces[f].cell for f in fs.squares), key=lambda c: (-c.y, c.x))
        self.cells: list[Point] = cells
        self.number = {c: i for i, c in enumerate(cells)}
        self.face_of = [fs.square_at[c] for c in cells]
        self.square_of_face = {f: i for i, f in enumerate(self.face_of)}
        ix = g.index
        self.corners = []
        self.edge = []
        self.across = []
        self.rises = []
        for c in cells:
            x, y = c
            v00, v10 = ix[(x, y)], ix[(x + 1, y)]
            v11, v01 = ix[(x + 1, y + 1)], ix[(x, y + 1)]
            self.corners.append((v00, v10, v11, v01))
            sides = [
                g.edge_id(v10, v11),  # E
                g.edge_id(v01, v11),  # N
                g.edge_id(v00, v01),  # W
                g.edge_id(v00, v10),  # S
            ]
            self.edge.append(sides)
            # outward darts with the square on their right (clockwise walk)
            darts = [(v11, v10), (v01, v11), (v00, v01), (v10, v00)]
            row = []
            for d, (a, b) in enumerate(darts):
                other = fs.dart_face[(b, a)]
                sq = self.square_of_face.get(other)
                row.append(sq if sq is not None else -1 - other)
            self.across.append(row)
            even = (x + y) % 2 == 0
            # horizontal sides rise when the cell parity is odd, vertical when even
            self.rises.append([1 if even else -1, -1 if even else 1, 1 if even else -1, -1 if even else 1])

    def __len__(self) -> int:
        return len(self.cells)
