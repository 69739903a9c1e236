import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gridham.chains import (
    DifferenceSystem,
    DifferentComponent,
    Direction,
    EdgeStatus,
    InfeasibleSystem,
    boundary1,
    boundary2,
    classify_edges,
    connect_heights,
    exists_height,
    extremal_height,
    face_clusters,
    height_from_subgraph,
    homology_dimension,
    negative_cycle,
    shortest_distance,
    subgraph_from_height,
    subgraph_system,
    vertex_charge,
)
from gridham.cover import degree_subgraph
from gridham.cover import CycleCover, find_initial_cover, omega
from gridham.grid import parse_grid, rect
from gridham.oracle import enumerate_covers, enumerate_heights
from strategies import polyomino_graphs

RING = "####\n#..#\n#..#\n####\n"


def random_system(rng: random.Random, n: int, arcs: int, lo=-3, hi=3) -> DifferenceSystem:
    sys = DifferenceSystem(list(range(n)))
    for _ in range(arcs):
        a, b = rng.sample(range(n), 2)
        sys.add(a, b, rng.randint(lo, hi))
    return sys


@given(polyomino_graphs(10), st.data())
def test_boundary_of_boundary_vanishes(g, data):
    faces = list(range(len(g.faces.faces)))
    chain = {f: data.draw(st.integers(-3, 3)) for f in faces}
    assert boundary1(g, boundary2(g, chain)) == {}


@given(polyomino_graphs(10))
def test_omega_has_vertex_charge_boundary(g):
    h0 = degree_subgraph(g, 2)
    if h0 is None:
        return
    h = CycleCover(g, h0)
    assert boundary1(g, omega(h)) == vertex_charge(g, 2)


@pytest.mark.parametrize("mask, holes", [("##\n##\n", 0), (RING, 1), ("#####\n#.#.#\n#####\n", 2)])
def test_homology_dimension(mask, holes):
    g = parse_grid(mask)
    assert homology_dimension(g) == 0
    assert homology_dimension(g, punctured=True) == holes


def test_boundary_of_outer_is_minus_sum_of_bounded():
    # the whole-face chain is a cycle: its boundary cancels
    g = parse_grid(RING)
    assert boundary2(g, {f: 1 for f in range(len(g.faces.faces))}) == {}


def test_single_arc_is_arithmetic_progression():
    sys = DifferenceSystem(["a", "b"], reference="a")
    sys.restrict("a", "b", -2, 1)
    values = sorted(t["b"] for t in enumerate_heights(sys, 5))
    assert values == [-2, -1, 0, 1]
    assert extremal_height(sys)["b"] == 1
    assert extremal_height(sys, direction=Direction.MIN)["b"] == -2


def test_negative_cycle_detected():
    sys = DifferenceSystem([0, 1, 2])
    sys.add(0, 1, 1)
    sys.add(1, 2, -1)
    sys.add(2, 0, -1)
    assert not exists_height(sys)
    cyc = negative_cycle(sys)
    assert cyc[0] == cyc[-1] and sum(sys.arcs[(a, b)] for a, b in zip(cyc, cyc[1:])) < 0
    with pytest.raises(InfeasibleSystem):
        extremal_height(sys)


def test_acyclic_negative_arcs_are_feasible():
    # labels here improve more than |F| times before settling
    sys = DifferenceSystem([0, 1, 2, 3])
    for (a, b), c in {(3, 1): -2, (0, 2): -1, (3, 0): -2, (1, 2): -3, (1, 0): -3}.items():
        sys.add(a, b, c)
    assert exists_height(sys) and negative_cycle(sys) is None


def test_fraction_costs():
    sys = DifferenceSystem([0, 1])
    sys.restrict(0, 1, Fraction(-1, 2), Fraction(1, 2))
    assert extremal_height(sys)[1] == Fraction(1, 2)
    assert shortest_distance(sys, 1, 0) == Fraction(1, 2)


def test_random_systems_against_enumeration():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(2, 5)
        sys = random_system(rng, n, rng.randint(n, 3 * n))
        # box the faces so the enumeration is finite and complete
        for f in sys.faces[1:]:
            sys.restrict(0, f, -4, 4)
        fields = enumerate_heights(sys, 4 * n)
        assert exists_height(sys) == bool(fields)
        if fields:
            top = extremal_height(sys)
            assert top in fields
            assert all(all(top[f] >= t[f] for f in sys.faces) for t in fields)


def test_clusters_and_connect_heights_on_ring_covers():
    g = parse_grid("#####\n#####\n##.##\n#####\n#####\n")
    h0 = find_initial_cover(g)
    sys = subgraph_system(g, h0.edges)
    part = face_clusters(sys)
    cat = enumerate_covers(g, cap=None)
    fields = [height_from_subgraph(g, h0.edges, CycleCover.from_mask(g, m).edges) for m in cat.masks]
    for t in fields:
        assert sys.satisfied_by(t)
    hole = g.faces.holes[0]
    same = [t for t in fields if t[hole] == fields[0][hole]]
    for t in same[1:6]:
        moves = connect_heights(sys, fields[0], t, part)
        l1 = sum(abs(fields[0][f] - t[f]) for f in sys.faces)
        assert sum(abs(d) for _, d in moves) == l1
        assert len(moves) <= l1
    # across components the hole itself has to move
    other = [t for t in fields if t[hole] != fields[0][hole]]
    assert other
    moves = connect_heights(sys, fields[0], other[0], part)
    assert hole in {f for f, _ in moves}


def test_pinned_cluster_blocks_connection():
    sys = DifferenceSystem([0, 1, 2])
    sys.restrict(0, 1, 1, 1)
    sys.restrict(1, 2, -1, 1)
    part = face_clusters(sys)
    assert part.same(0, 1) and not part.same(1, 2)
    with pytest.raises(DifferentComponent):
        connect_heights(sys, {0: 0, 1: 1, 2: 0}, {0: 0, 1: 2, 2: 2}, part)


@given(polyomino_graphs(9))
def test_height_round_trip(g):
    h0 = degree_subgraph(g, 2)
    if h0 is None:
        return
    cat = enumerate_covers(g, cap=None)
    for m in cat.masks[:10]:
        h = CycleCover.from_mask(g, m)
        tau = height_from_subgraph(g, h0, h.edges)
        assert subgraph_from_height(g, h0, tau) == h.edges


def test_edge_classification_on_two_by_four():
    g = rect(4, 2)
    status = classify_edges(g)
    # two covers, the 8-ring and two 4-cycles: the two middle rungs and the
    # two middle horizontal edges change
    assert sum(s is EdgeStatus.FREE for s in status) == 4
    assert sum(s is EdgeStatus.FIXED_IN for s in status) == 6


def test_edge_classification_matches_enumeration():
    g = rect(4, 4)
    status = classify_edges(g)
    masks = enumerate_covers(g).masks
    for e, s in enumerate(status):
        used = {(m >> e) & 1 for m in masks}
        expected = EdgeStatus.FREE if used == {0, 1} else (EdgeStatus.FIXED_IN if used == {1} else EdgeStatus.FIXED_OUT)
        assert s is expected
