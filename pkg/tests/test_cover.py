import pytest
from hypothesis import given

from gridham.cover import (
    CycleCover,
    InvalidCover,
    NoCover,
    SquareClass,
    boundary_faces,
    degree_subgraph,
    find_initial_cover,
)
from gridham.grid import GridGraph, parse_grid, rect
from gridham.oracle import count_cycles, enumerate_covers
from strategies import polyomino_graphs


def two_squares_cover(g):
    """Two 2x2 cycles side by side on a 4x2 block."""
    return CycleCover.from_point_pairs(
        g,
        [
            ((0, 0), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (0, 1)), ((0, 1), (0, 0)),
            ((2, 0), (3, 0)), ((3, 0), (3, 1)), ((3, 1), (2, 1)), ((2, 1), (2, 0)),
        ],
    )


def test_degree_check():
    g = rect(2, 2)
    with pytest.raises(InvalidCover):
        CycleCover(g, [0, 1])
    h = CycleCover(g, range(4))
    assert h.p == 1 and len(h.cycles[0]) == 4


def test_no_cover_for_odd_block():
    with pytest.raises(NoCover):
        find_initial_cover(rect(3, 3))
    assert degree_subgraph(rect(3, 3), 2) is None


def test_no_cover_when_disconnected():
    with pytest.raises(NoCover):
        find_initial_cover(GridGraph([(0, 0), (1, 0), (0, 1), (1, 1), (5, 5), (6, 5), (5, 6), (6, 6)]))


def test_cycles_start_at_smallest_vertex():
    g = rect(4, 2)
    h = two_squares_cover(g)
    assert h.p == 2
    assert [c[0] for c in h.cycles] == sorted(c[0] for c in h.cycles)
    for c in h.cycles:
        assert c[0] == min(c)


def test_json_form():
    g = rect(2, 2)
    data = CycleCover(g, range(4)).to_json()
    assert data["p"] == 1
    assert data["edges"] == [[[0, 0], [0, 1]], [[0, 0], [1, 0]], [[0, 1], [1, 1]], [[1, 0], [1, 1]]]
    assert sorted(map(tuple, data["cycles"][0])) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_mask_round_trip():
    g = rect(4, 4)
    for m in enumerate_covers(g).masks:
        assert CycleCover.from_mask(g, m).mask == m


@given(polyomino_graphs(12))
def test_initial_cover_is_two_factor(g):
    edges = degree_subgraph(g, 2)
    if edges is None:
        return
    h = CycleCover(g, edges)
    assert h.p == count_cycles(g, h.mask)
    assert sum(len(c) for c in h.cycles) == len(g.points)


def test_boundary_classes_two_squares():
    g = rect(4, 2)
    h = two_squares_cover(g)
    bs = boundary_faces(h)
    # the middle square touches both cycles; its rungs are in H, the
    # horizontal pair sides are not
    mid = g.squares.number[(1, 0)]
    assert set(bs.squares) == {mid}
    assert bs.squares[mid] is SquareClass.PLAIN
    assert g.faces.outer in bs.faces


def test_single_cycle_has_no_boundary_squares():
    g = rect(4, 2)
    ring = CycleCover(g, [e for e in range(len(g.edges)) if e not in {
        g.edge_id(g.index[(1, 1)], g.index[(1, 0)]),
        g.edge_id(g.index[(2, 1)], g.index[(2, 0)]),
    }])
    assert ring.p == 1
    assert boundary_faces(ring).squares == {}


def test_triple_and_corner_examples():
    g = rect(4, 4)
    tab = g.squares
    triple = CycleCover.from_mask(g, 0xBAF0FB)  # three cycles meet at (1,1)
    assert triple.p == 3
    assert boundary_faces(triple).squares[tab.number[(1, 1)]] is SquareClass.TRIPLE
    corner = CycleCover.from_mask(g, 0xBAF2D7)  # corner of the top L-shaped cycle
    assert corner.p == 2
    assert boundary_faces(corner).squares[tab.number[(1, 1)]] is SquareClass.CORNER


def test_critical_example():
    # 4 wide, 5 tall: an 8-ring on top of a 12-ring; square (1,2) has the
    # upper pair side in H and the lower one out
    g = rect(4, 5)
    h = CycleCover.from_mask(g, 0x78DECAD7)
    assert h.p == 2
    s = g.squares.number[(1, 2)]
    bs = boundary_faces(h)
    assert bs.squares[s] is SquareClass.CRITICAL
    info = bs.critical[s]
    assert (info.in_side, info.out_side, info.kind) == (1, 3, 1)
