import pytest

from gridham.chains import DifferenceSystem, subgraph_system
from gridham.cover import find_initial_cover
from gridham.generators import tower
from gridham.grid import parse_grid, rect
from gridham.oracle import (
    CapExceeded,
    count_cycles,
    count_hamiltonian_cycles,
    enumerate_covers,
    enumerate_heights,
    find_hamiltonian_cycle,
    min_cycles_bruteforce,
    stationary_check,
    transition_matrix,
    z_components,
)

HOLED = "#####\n#####\n##.##\n#####\n#####\n"


@pytest.mark.parametrize(
    "w, h, covers",
    [(2, 2, 1), (4, 2, 2), (4, 4, 18), (4, 6, 222), (6, 6, 13903)],
)
def test_cover_counts(w, h, covers):
    assert len(enumerate_covers(rect(w, h), cap=None)) == covers


@pytest.mark.parametrize("w, h, bound", [(4, 4, 8), (4, 6, 12)])
def test_height_enumeration_agrees_with_edge_backtracking(w, h, bound):
    g = rect(w, h)
    sys = subgraph_system(g, find_initial_cover(g).edges)
    assert len(enumerate_heights(sys, bound)) == len(enumerate_covers(g))


def test_catalog_is_sorted_and_valid():
    g = rect(4, 4)
    cat = enumerate_covers(g)
    assert cat.masks == sorted(cat.masks)
    for m in cat.masks:
        deg = [0] * len(g.points)
        for e, (a, b) in enumerate(g.edges):
            if m >> e & 1:
                deg[a] += 1
                deg[b] += 1
        assert set(deg) == {2}
    assert sorted(cat.p) == [1] * 6 + [2] * 7 + [3] * 4 + [4]


def test_cap():
    assert len(rect(6, 6).edges) == 60  # at the default cap, still allowed
    with pytest.raises(CapExceeded):
        enumerate_covers(rect(6, 7))
    with pytest.raises(CapExceeded):
        enumerate_covers(rect(4, 4), cap=10)


def test_count_cycles_union_find():
    g = rect(4, 2)
    everything = (1 << len(g.edges)) - 1
    ring = everything & ~(1 << g.edge_id(g.index[(1, 0)], g.index[(1, 1)])) & ~(
        1 << g.edge_id(g.index[(2, 0)], g.index[(2, 1)])
    )
    assert count_cycles(g, ring) == 1


def test_dump_format():
    text = enumerate_covers(rect(4, 2)).dump()
    lines = text.splitlines()
    assert lines[0] == "; covers=2 edges=10 vertices=8"
    assert all(int(x, 16) >= 0 for x in lines[1:])


def test_hamiltonian_counts():
    assert count_hamiltonian_cycles(rect(4, 4)) == 6
    assert count_hamiltonian_cycles(rect(3, 3)) == 0
    assert count_hamiltonian_cycles(tower(3, 3), cap=None) == 6


def test_backtracking_cycle_search():
    cyc = find_hamiltonian_cycle(rect(4, 4))
    assert sorted(cyc) == list(range(16))
    assert find_hamiltonian_cycle(rect(3, 3)) is None


def test_z_components_hole_free_and_holed():
    assert z_components(enumerate_covers(rect(4, 4))).count == 1
    cat = enumerate_covers(parse_grid(HOLED), cap=None)
    comps = z_components(cat)
    assert comps.count == 3
    assert sorted(len(m) for m in comps.members()) == [1, 1, 81]


def test_min_cycles():
    cat = enumerate_covers(parse_grid(HOLED), cap=None)
    mins = min_cycles_bruteforce(cat)
    assert mins.overall == 1
    assert sorted(mins.per_component.values()) == [1, 1, 1]
    assert count_cycles(cat.g, mins.witness) == 1


def test_heights_of_infeasible_and_single_arc():
    bad = DifferenceSystem([0, 1])
    bad.add(0, 1, -1)
    bad.add(1, 0, 0)
    assert enumerate_heights(bad, 3) == []
    one = DifferenceSystem([0, 1])
    one.restrict(0, 1, 0, 2)
    assert [t[1] for t in enumerate_heights(one, 5)] == [0, 1, 2]


def test_single_state_stationary_check():
    res = stationary_check(rect(2, 2), steps=100, seed=1)
    assert res.statistic == 0.0 and res.states == 1


def test_transition_rows_sum_to_one():
    g = rect(4, 4)
    cat = enumerate_covers(g)
    states = [m for m, p in zip(cat.masks, cat.p) if p <= 2]
    mat = transition_matrix(g, states)
    assert mat.shape == (13, 13)
    assert (abs(mat.sum(axis=1) - 1) < 1e-12).all()
