import pytest
from hypothesis import given

from gridham.grid import (
    Color,
    EmptyGraph,
    FaceKind,
    GridGraph,
    MaskParseError,
    NotConnected,
    color,
    parse_grid,
    rect,
    sign,
    to_mask,
)
from strategies import polyomino_graphs, vertex_sets


def test_colouring_by_parity():
    assert color((0, 0)) is Color.BLACK
    assert color((1, 0)) is Color.WHITE
    assert sign((2, 3)) == -1
    assert sign((3, 3)) == 1


def test_parse_reads_top_row_first():
    g = parse_grid("#.\n##\n")
    assert set(g.vertices) == {(0, 1), (0, 0), (1, 0)}
    assert g.points[0] == (0, 1)


def test_parse_skips_comments_and_trailing_blank_lines():
    g = parse_grid("; a comment\n##\n##\n\n\n")
    assert len(g) == 4


def test_parse_error_position():
    with pytest.raises(MaskParseError) as info:
        parse_grid("##\n#x\n")
    assert (info.value.line, info.value.column) == (2, 2)


def test_empty_mask():
    with pytest.raises(EmptyGraph):
        parse_grid("..\n..\n")


def test_edge_order_and_orientation():
    g = rect(2, 2)
    # reading order: (0,1) (1,1) (0,0) (1,0); black first in every edge
    assert [tuple(p) for p in g.points] == [(0, 1), (1, 1), (0, 0), (1, 0)]
    for b, w in g.edges:
        assert sign(g.points[b]) == 1 and sign(g.points[w]) == -1
    assert len(g.edges) == 4


@pytest.mark.parametrize(
    "mask, faces, squares, holes",
    [
        ("##\n##\n", 2, 1, 0),
        ("###\n###\n", 3, 2, 0),
        ("####\n####\n####\n####\n", 10, 9, 0),
        ("####\n#..#\n#..#\n####\n", 2, 0, 1),
        ("#####\n#####\n##.##\n#####\n#####\n", 14, 12, 1),
    ],
)
def test_face_counts(mask, faces, squares, holes):
    fs = parse_grid(mask).faces
    assert len(fs.faces) == faces
    assert len(fs.squares) == squares
    assert fs.hole_count == holes
    assert fs.faces[fs.outer].kind is FaceKind.OUTER


def test_ring_hole_boundary_length():
    fs = parse_grid("####\n#..#\n#..#\n####\n").faces
    assert len(fs.faces[fs.holes[0]].boundary) == 12


def test_square_is_right_of_its_darts():
    g = rect(2, 2)
    fs = g.faces
    sq = fs.squares[0]
    a, b = g.index[(0, 0)], g.index[(0, 1)]
    assert fs.dart_face[(a, b)] == sq
    assert fs.left_right(a, b) == (fs.outer, sq)


def test_faces_need_connected_graph():
    g = GridGraph([(0, 0), (5, 5)])
    with pytest.raises(NotConnected):
        g.faces


def test_two_connected():
    assert rect(3, 3).two_connected
    assert not GridGraph([(0, 0), (1, 0), (2, 0)]).two_connected
    # two squares sharing a corner
    assert not GridGraph([(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (2, 2), (1, 2)]).two_connected


def test_square_table_sides():
    g = rect(3, 2)
    tab = g.squares
    assert [tuple(c) for c in tab.cells] == [(0, 0), (1, 0)]
    s = tab.number[(0, 0)]
    assert tab.across[s][0] == tab.number[(1, 0)]
    assert tab.across[s][2] < 0
    # cell (0,0) is even: E and W rise
    assert tab.rises[s] == [1, -1, 1, -1]
    assert tab.rises[tab.number[(1, 0)]] == [-1, 1, -1, 1]


@given(vertex_sets())
def test_mask_round_trip(pts):
    g = GridGraph(pts)
    again = parse_grid(to_mask(g))
    assert again.vertices == g.vertices


@given(polyomino_graphs(12))
def test_euler_relation_and_darts(g):
    fs = g.faces
    assert len(g.points) - len(g.edges) + len(fs.faces) == 2
    # every dart lies on exactly one face
    darts = sum(len(f.boundary) for f in fs.faces)
    assert darts == 2 * len(g.edges)
    assert all(len(fs.faces[f].boundary) == 4 for f in fs.squares)


@given(vertex_sets(4, 4))
def test_normalized_is_translation(pts):
    g = GridGraph(pts).normalized()
    xs = [p.x for p in g.points]
    assert min(xs) >= 0
    assert len(g) == len(pts)


def test_pickle_round_trip():
    import pickle

    g = rect(3, 3)
    g.squares  # populate caches
    h = pickle.loads(pickle.dumps(g))
    assert h == g and len(h.squares) == 4
