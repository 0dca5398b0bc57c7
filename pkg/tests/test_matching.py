import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffsurf.complex import all_punctures, puncture, reorient
from pfaffsurf.enumeration import Orientation, is_pfaffian
from pfaffsurf.errors import NotCyclic, RankDeficient, ZeroIncidence
from pfaffsurf.generators import fixture, random_cellulation, torus_grid
from pfaffsurf.gf2 import det_int
from pfaffsurf.incidence import incidence_matrix
from pfaffsurf.matching import (
    PerfectMatching,
    build_match_graph,
    construct,
    construct_orientation,
    enumerate_matchings,
    find_acyclic_matching,
    involution,
    is_acyclic,
    matching_sign,
    peel,
    permutation_sign,
    residual_cycles,
    residual_degrees,
    select_row_basis,
)
from pfaffsurf.oracles import ryser_permanent

from helpers import punctured


def biadjacency(g):
    return [[int((f, e) in g.arcs) for f in g.faces] for e in g.r_edges]


@pytest.mark.parametrize(
    "name,face,size", [("tetrahedron", 0, 3), ("labelled_torus", 8, 8), ("cube", 0, 5), ("one_face_torus", 0, 0)]
)
def test_row_basis_size(name, face, size):
    k = puncture(fixture(name), face)
    r = select_row_basis(k)
    assert len(r) == size
    assert r == sorted(r)


def test_row_basis_is_greedy_in_edge_order():
    # the first edge has a nonzero row, so the greedy scan keeps it
    k = punctured("tetrahedron", 3)
    r = select_row_basis(k)
    assert r[0] == 0


def test_row_basis_with_custom_order():
    k = punctured("torus_grid_3x3", 8)
    reverse = select_row_basis(k, order=range(k.d - 1, -1, -1))
    assert len(reverse) == 8
    assert reverse != select_row_basis(k)


def test_rank_deficient_edge_order():
    k = punctured("tetrahedron")
    with pytest.raises(RankDeficient):
        select_row_basis(k, order=[0, 1])


def test_match_graph_sizes():
    k = puncture(fixture("labelled_torus"), 8)
    g = build_match_graph(k, select_row_basis(k))
    assert len(g.faces) == len(g.r_edges) == 8
    assert all(1 <= len(g.faces_of(e)) <= 2 for e in g.r_edges)


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([1, 2, 0]) == 1
    assert permutation_sign([3, 2, 1, 0]) == 1


def test_basis_matching_is_unique(any_fixture):
    for k in all_punctures(any_fixture):
        r = select_row_basis(k)
        g = build_match_graph(k, r)
        matchings = enumerate_matchings(g)
        assert len(matchings) == ryser_permanent(biadjacency(g)) == 1
        (m,) = matchings
        assert matching_sign(m, k) == det_int(incidence_matrix(k).rows_for(r))


def four_cycle():
    """torus_grid_2x2 without face 3; faces 0 and 1 both contain edges 4 and 5."""
    k = puncture(torus_grid(2, 2), 3)
    return k, build_match_graph(k, [4, 5, 6])


def test_four_cycle_graph():
    k, g = four_cycle()
    assert g.faces_of(4) == [0, 1] and g.faces_of(5) == [0, 1]
    assert g.faces_of(6) == [2]
    matchings = enumerate_matchings(g)
    assert len(matchings) == 2
    a, b = matchings
    assert not is_acyclic(g, a) and not is_acyclic(g, b)
    assert involution(g, a) == b and involution(g, b) == a
    assert matching_sign(a, k) == -matching_sign(b, k)
    assert det_int(incidence_matrix(k).rows_for([4, 5, 6])) == 0


def test_residual_cycle_of_four_cycle():
    _, g = four_cycle()
    m = enumerate_matchings(g)[0]
    (cycle,) = residual_cycles(g, m)
    assert sorted(f for f, _ in cycle) == [0, 1]


def test_involution_rejects_acyclic_matching():
    k = punctured("tetrahedron")
    g = build_match_graph(k, select_row_basis(k))
    with pytest.raises(NotCyclic):
        involution(g, find_acyclic_matching(g))


def test_zero_incidence_sign():
    # the single face of the genus-2 octagon meets every edge twice with opposite signs
    k = punctured("genus_2_polygon")
    with pytest.raises(ZeroIncidence):
        matching_sign(PerfectMatching(((0, 0),)), k)


def random_sets(k, rng, count):
    usable = [e for e, refs in k.base.edge_slots.items() if len({r.face for r in refs}) == 2]
    return [sorted(rng.sample(usable, len(k.faces))) for _ in range(count)]


@pytest.mark.parametrize("name", ["torus_grid_2x2", "torus_grid_3x3", "cube", "prism_3", "tetrahedron"])
def test_involution_on_arbitrary_edge_sets(name):
    k = punctured(name)
    rng = random.Random(name)
    cyclic_seen = 0
    for r in random_sets(k, rng, 40):
        g = build_match_graph(k, r)
        matchings = enumerate_matchings(g)
        assert len(matchings) == ryser_permanent(biadjacency(g))
        cyclic = [m for m in matchings if not is_acyclic(g, m)]
        cyclic_seen += len(cyclic)
        for m in cyclic:
            partner = involution(g, m)
            assert partner != m
            assert involution(g, partner) == m
            assert not is_acyclic(g, partner)
            assert matching_sign(partner, k) == -matching_sign(m, k)
        assert sum(matching_sign(m, k) for m in cyclic) == 0
        acyclic_sum = sum(matching_sign(m, k) for m in matchings if is_acyclic(g, m))
        assert acyclic_sum == det_int(incidence_matrix(k).rows_for(r))
    if name != "tetrahedron":
        assert cyclic_seen > 0


def test_residual_degrees(any_fixture):
    for k in all_punctures(any_fixture):
        g = build_match_graph(k, select_row_basis(k))
        m = find_acyclic_matching(g)
        for vertex, (indeg, outdeg) in residual_degrees(g, m).items():
            if vertex.startswith("e"):
                e = int(vertex[1:])
                assert outdeg == 1
                assert indeg == len(g.faces_of(e)) - 1
                assert indeg <= 1
            else:
                assert indeg == 1


@pytest.mark.parametrize("name,face,steps", [("tetrahedron", 0, 3), ("labelled_torus", 8, 8)])
def test_peel_steps(name, face, steps):
    k = puncture(fixture(name), face)
    g = build_match_graph(k, select_row_basis(k))
    order = peel(g)
    assert len(order) == steps
    assert sorted(f for f, _ in order) == list(k.faces)
    # every peeled face only meets R-edges peeled at or before its step
    seen = set()
    for f, e in order:
        seen.add(e)
        assert set(g.edges_of(f)) <= seen


def test_acyclic_matching_on_every_puncture(any_fixture):
    for k in all_punctures(any_fixture):
        g = build_match_graph(k, select_row_basis(k))
        assert is_acyclic(g, find_acyclic_matching(g))


def test_construction_on_every_puncture(any_fixture):
    for k in all_punctures(any_fixture):
        assert is_pfaffian(k, construct_orientation(k))


def test_construction_makes_no_flips_when_already_pfaffian():
    k = punctured("torus_grid_3x3", 8)
    bits = construct(k).bits
    k2 = puncture(reorient(k.base, bits), 8)
    assert is_pfaffian(k2, Orientation.reference(k2.d))
    assert construct(k2).flipped == ()


def test_construction_with_other_basis_orders():
    from pfaffsurf.matching import _good_parity

    k = punctured("labelled_torus", 8)
    rng = random.Random(11)
    for _ in range(10):
        order = list(range(k.d))
        rng.shuffle(order)
        g = build_match_graph(k, select_row_basis(k, order))
        bits = [0] * k.d
        for f, e in peel(g):
            if not _good_parity(k, bits, f):
                bits[e] ^= 1
        assert is_pfaffian(k, Orientation(tuple(bits)))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), genus=st.integers(0, 2))
def test_construction_on_random_cellulations(seed, genus):
    c = random_cellulation(genus, random.Random(seed), max_edges=max(24, 4 * genus))
    for face in {0, c.p - 1}:
        k = puncture(c, face)
        assert is_pfaffian(k, construct_orientation(k))


def test_dot_rendering():
    _, g = four_cycle()
    m = enumerate_matchings(g)[0]
    dot = g.to_dot(m)
    assert dot.startswith("digraph G {")
    assert dot.count("style=bold") == 3
    assert g.to_dot().count("->") == len(g.arcs)
