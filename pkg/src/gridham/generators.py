"""Instance families: rectangles, (chipped) Aztec diamonds, towers, polyominoes."""

from __future__ import annotations

import random
from typing import Iterable, Iterator

from .grid import GridGraph, rect, sign


class InvalidParams(ValueError):
    pass


def rectangle(width: int, height: int) -> GridGraph:
    if width < 1 or height < 1:
        raise InvalidParams("rectangle sides must be positive")
    return rect(width, height)


def aztec_points(radius: int) -> set[tuple[int, int]]:
    """Lattice points (x, y) with |2x - 2| + |2y - 1| <= 2 * radius.

    This is the Aztec diamond of the given radius (2 * radius * (radius + 1)
    vertices), shifted one step right so that the top pair is white-then-black.
    """
    pts = set()
    for y in range(-radius + 1, radius + 1):
        for x in range(-radius + 1, radius + 3):
            if abs(2 * x - 3) + abs(2 * y - 1) <= 2 * radius:
                pts.add((x, y))
    return pts


def aztec(n: int) -> GridGraph:
    """Aztec diamond of size 2n (radius 2n)."""
    if n < 1:
        raise InvalidParams("n must be positive")
    return GridGraph(aztec_points(2 * n))


def chips(pts: set[tuple[int, int]]) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Removable chips: horizontal pairs, white on the left, nothing above either."""
    top: dict[int, int] = {}
    for x, y in pts:
        top[x] = max(top.get(x, y), y)
    out = []
    for x, y in sorted(pts):
        if y <= 0 or (x + 1, y) not in pts or sign((x, y)) > 0:
            continue
        if top[x] == y and top[x + 1] == y:
            out.append(((x, y), (x + 1, y)))
    return out


def chipped_aztec(n: int, k: int, seed: int = 0) -> GridGraph:
    """Aztec diamond of size 2n with k chips removed from the upper half.

    Chips are removed one at a time, each drawn uniformly (seeded) from the
    chips available at that moment.
    """
    if n < 1 or k < 0:
        raise InvalidParams("need n >= 1 and k >= 0")
    pts = aztec_points(2 * n)
    rng = random.Random(seed)
    for _ in range(k):
        options = chips(pts)
        if not options:
            raise InvalidParams(f"only {_} chips could be removed")
        a, b = options[rng.randrange(len(options))]
        pts.discard(a)
        pts.discard(b)
    return GridGraph(pts)


def tower(cols: int = 3, stages: int = 3) -> GridGraph:
    """Three squares wide notched tower with stages! Hamiltonian cycles.

    Rows y = 0 .. 6 * stages - 10 span x = 0 .. 3, except that the rows
    y = 3, 6, ... strictly inside the tower lack their rightmost vertex.
    Measured with the oracle: 2, 6 and 24 Hamiltonian cycles for 2, 3 and
    4 stages (2, 45 and 630 covers in all). Only cols = 3 is defined.
    """
    if cols != 3:
        raise InvalidParams("only the three-column tower is defined")
    if stages < 2:
        raise InvalidParams("stages must be at least 2")
    rows = 6 * stages - 9
    pts = set()
    for y in range(rows):
        right = cols - 1 if (y % 3 == 0 and 0 < y < rows - 2) else cols
        pts.update((x, y) for x in range(right + 1))
    return GridGraph(pts)


def cells_to_graph(cells: Iterable[tuple[int, int]]) -> GridGraph:
    """Grid graph induced by the corners of a set of unit cells."""
    pts = set()
    for x, y in cells:
        pts.update(((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)))
    return GridGraph(pts)


def _canonical(cells: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    cells = list(cells)
    best = None
    for t in range(8):
        out = []
        for x, y in cells:
            if t & 1:
                x, y = y, x
            if t & 2:
                x = -x
            if t & 4:
                y = -y
            out.append((x, y))
        mx = min(p[0] for p in out)
        my = min(p[1] for p in out)
        form = tuple(sorted((x - mx, y - my) for x, y in out))
        if best is None or form < best:
            best = form
    return best


def free_polyominoes(max_cells: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every polyomino with up to max_cells cells, once per symmetry class."""
    level = {((0, 0),)}
    for size in range(1, max_cells + 1):
        for form in sorted(level):
            yield form
        if size == max_cells:
            break
        nxt = set()
        for form in level:
            have = set(form)
            for x, y in form:
                for c in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                    if c not in have:
                        nxt.add(_canonical(form + (c,)))
        level = nxt


def polyomino_graphs(max_cells: int) -> list[GridGraph]:
    """Distinct 2-connected grid graphs spanned by polyominoes of up to max_cells cells."""
    seen = set()
    out = []
    for form in free_polyominoes(max_cells):
        g = cells_to_graph(form)
        key = _canonical(g.points)
        if key in seen:
            continue
        seen.add(key)
        if g.two_connected:
            out.append(g)
    return out


def random_cells(n: int, rng: random.Random) -> list[tuple[int, int]]:
    cells = [(0, 0)]
    have = {(0, 0)}
    while len(cells) < n:
        x, y = cells[rng.randrange(len(cells))]
        dx, dy = rng.choice(((1, 0), (-1, 0), (0, 1), (0, -1)))
        c = (x + dx, y + dy)
        if c not in have:
            have.add(c)
            cells.append(c)
    return cells


def random_polyomino(cells: int, seed: int, require_cover: bool = True, tries: int = 1000) -> GridGraph:
    """Seeded random polyomino graph: 2-connected, and by default with a cycle cover.

    Cells are grown one at a time from a random existing cell; candidates
    failing the filters are discarded and the same generator keeps drawing.
    """
    from .cover import degree_subgraph

    if cells < 1:
        raise InvalidParams("cells must be positive")
    rng = random.Random(seed)
    for _ in range(tries):
        g = cells_to_graph(random_cells(rng.randint(max(1, cells // 2), cells), rng)).normalized()
        if not g.two_connected:
            continue
        if require_cover and degree_subgraph(g, 2) is None:
            continue
        return g
    raise InvalidParams("no suitable polyomino found")


def holed_polyomino(cells: int, holes: int, seed: int, tries: int = 2000) -> GridGraph:
    """Random polyomino with 1 or 2 holes made by deleting interior vertices.

    One hole: delete an adjacent black/white pair of fully surrounded
    vertices. Two holes: delete one black and one white fully surrounded
    vertex that share no square. Either way the colour balance is kept.
    """
    from .cover import degree_subgraph

    if holes not in (1, 2):
        raise InvalidParams("holes must be 1 or 2")
    rng = random.Random(seed)
    for _ in range(tries):
        base = cells_to_graph(random_cells(rng.randint(max(4, cells // 2), cells), rng))
        inner = [p for p in base.points if _surrounded(base, p)]
        if not inner:
            continue
        rng.shuffle(inner)
        if holes == 1:
            pairs = [(a, b) for a in inner for b in inner if a < b and abs(a.x - b.x) + abs(a.y - b.y) == 1]
        else:
            pairs = [
                (a, b)
                for a in inner
                for b in inner
                if a < b and sign(a) != sign(b) and max(abs(a.x - b.x), abs(a.y - b.y)) > 2
            ]
        if not pairs:
            continue
        a, b = pairs[rng.randrange(len(pairs))]
        g = GridGraph(set(base.points) - {a, b}).normalized()
        if not g.connected or not g.two_connected or g.faces.hole_count != holes:
            continue
        if degree_subgraph(g, 2) is None:
            continue
        return g
    raise InvalidParams("no suitable holed polyomino found")


def _surrounded(g: GridGraph, p) -> bool:
    x, y = p
    return all((x + dx, y + dy) in g.vertices for dx in (-1, 0, 1) for dy in (-1, 0, 1))


FAMILIES = ("rect", "aztec", "chipped-aztec", "tower", "random-polyomino")
