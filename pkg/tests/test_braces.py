import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpfybe.braces import (
    SkewBrace,
    bar_vector,
    brace_from_regular_subgroup,
    build_brace,
    circle_inverse,
    circle_table,
    opposite_brace,
    phi_isomorphism,
)
from fpfybe.errors import BadPsi, BraceAxiomViolation
from fpfybe.groups import dihedral, group_by_name
from fpfybe.morphisms import GroupMap, enumerate_fpf, map_from_generators, trivial_map
from fpfybe.perms import opposite_regular_subgroup, regular_subgroup

GROUPS = ["D3", "D4", "D6", "D8", "A4", "S4", "M7_3", "M5_2", "C2xC4"]


def brace_relation_holds(G, circ):
    n = G.order
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = circ[a, G.mul(b, c)]
                rhs = G.prod(circ[a, b], G.inv(a), circ[a, c])
                if lhs != rhs:
                    return False
    return True


def r(G, i, j=0):
    n = G.order // 2
    return (i % n) + n * j


@pytest.mark.parametrize("name", GROUPS)
def test_every_fpf_map_gives_a_brace(name):
    G = group_by_name(name)
    for psi in enumerate_fpf(G):
        B = build_brace(G, psi)
        # g o h = g psi(g^-1) h psi(g), evaluated pointwise
        for g in G.elements():
            for h in G.elements():
                assert B.circ(g, h) == G.prod(g, psi(G.inv(g)), h, psi(g))
        assert all(B.circle[g, circle_inverse(B, g)] == G.identity for g in G.elements())
        phi = phi_isomorphism(G, psi)
        assert phi.is_bijective()


def test_brace_relation_pointwise_d4():
    G = dihedral(4)
    for psi in enumerate_fpf(G):
        assert brace_relation_holds(G, circle_table(G, psi))


def test_trivial_brace_is_the_group():
    G = group_by_name("S4")
    B = build_brace(G, trivial_map(G))
    assert np.array_equal(B.circle, G.cayley)
    assert np.array_equal(B.bar, G.inverse)


def test_d4_circle_formulas():
    # closed expressions for the two worked D4 circle operations
    G = dihedral(4)
    psi1 = map_from_generators(G, {1: G.index_of("rs"), 4: G.index_of("rs")})
    psi2 = map_from_generators(G, {1: G.index_of("r^2s"), 4: 0})
    c1, c2 = circle_table(G, psi1), circle_table(G, psi2)
    for i in range(4):
        for j in range(4):
            e = i + (-1) ** i * j
            assert c1[r(G, i), r(G, j)] == r(G, e)
            assert c1[r(G, i), r(G, j, 1)] == r(G, -i + (-1) ** i * j, 1)
            assert c1[r(G, i, 1), r(G, j)] == r(G, e, 1)
            assert c1[r(G, i, 1), r(G, j, 1)] == r(G, 2 - i + (-1) ** i * j)
            assert c2[r(G, i), r(G, j)] == r(G, e)
            assert c2[r(G, i), r(G, j, 1)] == r(G, e, 1)
            assert c2[r(G, i, 1), r(G, j)] == r(G, i - (-1) ** i * j, 1)
            assert c2[r(G, i, 1), r(G, j, 1)] == r(G, i - (-1) ** i * j)


@pytest.mark.parametrize("name", ["D4", "D6", "A4", "S4", "M7_3"])
def test_brace_from_subgroup_matches_direct(name):
    G = group_by_name(name)
    for psi in enumerate_fpf(G):
        B = build_brace(G, psi)
        N = regular_subgroup(G, psi)
        B2 = brace_from_regular_subgroup(N)
        assert B2.carrier is G
        assert B.same_tables(B2)
        Bop = brace_from_regular_subgroup(opposite_regular_subgroup(N))
        assert Bop.same_tables(opposite_brace(B))


def test_non_fpf_rejected():
    G = dihedral(4)
    with pytest.raises(BadPsi):
        build_brace(G, GroupMap.from_images(G, range(8)))


def test_broken_circle_rejected():
    G = dihedral(4)
    B = build_brace(G, enumerate_fpf(G)[3])
    circle = B.circle.copy()
    circle[[1, 2]] = circle[[2, 1]]
    with pytest.raises(BraceAxiomViolation):
        SkewBrace(G, circle, B.bar).verify()


@given(st.sampled_from(["D4", "D6", "A4", "M7_3"]), st.data())
@settings(max_examples=30, deadline=None)
def test_bar_is_circle_inverse(name, data):
    G = group_by_name(name)
    psi = data.draw(st.sampled_from(enumerate_fpf(G)))
    bar = bar_vector(G, psi)
    circ = circle_table(G, psi)
    g = data.draw(st.integers(0, G.order - 1))
    assert circ[g, bar[g]] == G.identity == circ[bar[g], g]
