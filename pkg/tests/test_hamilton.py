import pytest

from gridham.cover import CycleCover, NoCover, find_initial_cover
from gridham.generators import chipped_aztec, holed_polyomino, polyomino_graphs, random_polyomino
from gridham.grid import GridGraph, parse_grid, rect
from gridham.hamilton import (
    Minimal,
    Reduced,
    component_representatives,
    is_hamiltonian,
    minimize_in_component,
    reduce_once,
    search_all_components,
    verify_certificate,
)
from gridham.height import signature
from gridham.oracle import enumerate_covers, min_cycles_by_signature, z_components

RING = "####\n#..#\n#..#\n####\n"
HOLED = "#####\n#####\n##.##\n#####\n#####\n"
TAUT = ".###\n.###\n####\n###.\n###.\n"  # exactly one cover, two cycles


def two_squares():
    g = rect(4, 2)
    return CycleCover.from_point_pairs(
        g,
        [
            ((0, 0), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (0, 1)), ((0, 1), (0, 0)),
            ((2, 0), (3, 0)), ((3, 0), (3, 1)), ((3, 1), (2, 1)), ((2, 1), (2, 0)),
        ],
    )


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_two_by_n_blocks_are_hamiltonian(n):
    v = is_hamiltonian(rect(2, n))
    assert v.hamiltonian and len(v.cycle) == 2 * n


def test_three_by_three_is_not():
    v = is_hamiltonian(rect(3, 3))
    assert not v.hamiltonian and v.reason == "no cycle cover"


def test_not_two_connected():
    assert is_hamiltonian(GridGraph([(0, 0), (1, 0), (2, 0)])).reason == "not 2-connected"


def test_ring_has_one_signature():
    g = parse_grid(RING)
    res = search_all_components(g)
    assert res.minimum == 1 and len(res.components) == 1


def test_witness_cycle_is_a_cycle():
    g = rect(4, 6)
    v = is_hamiltonian(g)
    cyc = v.cycle
    assert len(set(cyc)) == len(g.points)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def test_adjacent_squares_join_in_one_step():
    res = reduce_once(two_squares())
    assert isinstance(res, Reduced) and res.p == 1


def test_taut_graph_is_certified_minimal():
    g = parse_grid(TAUT)
    assert len(enumerate_covers(g)) == 1
    res = reduce_once(find_initial_cover(g))
    assert isinstance(res, Minimal)
    cert = res.certificate
    assert (cert.m, cert.r) == (2, 0)
    assert verify_certificate(cert) == []
    assert cert.to_json()["m"] == 2


def test_chipped_aztec_component_minimum():
    g = chipped_aztec(2, 0)
    out = minimize_in_component(find_initial_cover(g))
    assert out.cover.p == 2


def test_holed_block_matches_oracle():
    g = parse_grid(HOLED)
    res = search_all_components(g)
    cat = enumerate_covers(g, cap=None)
    assert res.minimum == min(cat.p)
    assert {c.signature: c.p for c in res.components} == min_cycles_by_signature(cat)


def test_representatives_cover_each_component_once():
    g = parse_grid(HOLED)
    reps = component_representatives(g)
    assert sorted(signature(r) for r in reps) == [(-3,), (-1,), (1,)]


def test_hole_free_has_single_representative():
    assert len(component_representatives(rect(4, 4))) == 1


def test_no_cover_propagates():
    with pytest.raises(NoCover):
        search_all_components(rect(3, 5))


def test_every_cover_of_small_polyominoes_reaches_component_minimum():
    checked = 0
    for g in polyomino_graphs(8):
        cat = enumerate_covers(g, cap=None)
        if not len(cat):
            continue
        best = min_cycles_by_signature(cat)
        for m, sig in zip(cat.masks, cat.signatures):
            out = minimize_in_component(CycleCover.from_mask(g, m), check=True)
            assert signature(out.cover) == sig
            assert out.cover.p == best[sig]
            assert verify_certificate(out.certificate) == []
            checked += 1
    assert checked > 100


def test_minimal_certificates_are_sound_against_components():
    # a certified minimum is the true minimum of the cover's Z-component
    graphs = [holed_polyomino(24, 1 + s % 2, s) for s in range(20)]
    graphs += [chipped_aztec(3, 0), chipped_aztec(3, 1, 0)] + [random_polyomino(20, s) for s in range(20)]
    minimal = 0
    for g in graphs:
        cat = enumerate_covers(g, cap=None)
        comps = z_components(cat, distances=False)
        low = {}
        for lab, p in zip(comps.labels, cat.p):
            low[lab] = min(low.get(lab, p), p)
        for i, m in enumerate(cat.masks[:40]):
            out = minimize_in_component(CycleCover.from_mask(g, m))
            if out.cover.p < 2:
                continue
            res = reduce_once(out.cover)
            assert isinstance(res, Minimal)
            assert res.certificate.m == low[comps.labels[i]]
            assert verify_certificate(res.certificate) == []
            minimal += 1
    assert minimal >= 20


def test_parallel_search_agrees():
    g = holed_polyomino(30, 2, 5)
    a = search_all_components(g, jobs=1)
    b = search_all_components(g, jobs=2)
    assert [(c.signature, c.p) for c in a.components] == [(c.signature, c.p) for c in b.components]


def test_checks_can_be_disabled(monkeypatch):
    monkeypatch.setenv("GRIDHAM_CHECKS", "0")
    assert is_hamiltonian(rect(4, 4)).hamiltonian
