import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpfybe.errors import BadOrder, GroupError, MissingInverse, NoIdentity, NotAssociative, NotLatinSquare, UnknownGroup
from fpfybe.groups import (
    CATALOG,
    alternating,
    cycle_notation,
    dihedral,
    group_by_name,
    make_group_from_cayley,
    metacyclic,
    multiplicative_order,
    parity,
    symmetric,
)

SMALL = [n for n in CATALOG if group_by_name(n).order <= 24]


def test_catalog_resolves_and_orders():
    expected = {"C15": 15, "C2xC4": 8, "D12": 24, "S5": 120, "A5": 60, "M7_3": 21, "M13_3": 39}
    for name, order in expected.items():
        assert group_by_name(name).order == order
    for name in CATALOG:
        G = group_by_name(name)
        assert G.name == name


@pytest.mark.parametrize("name", ["Q8", "D", "S9", "M4_2", "Cx", ""])
def test_unknown_names(name):
    with pytest.raises((UnknownGroup, BadOrder, GroupError)):
        group_by_name(name)


@pytest.mark.parametrize("name", SMALL)
def test_group_axioms_by_brute_force(name):
    G = group_by_name(name)
    n, C = G.order, G.cayley
    e = G.identity
    for a in range(n):
        assert C[e, a] == a == C[a, e]
        assert C[a, G.inverse[a]] == e == C[G.inverse[a], a]
    for a, b, c in itertools.product(range(n), repeat=3):
        assert C[C[a, b], c] == C[a, C[b, c]]


@pytest.mark.parametrize("n", [3, 4, 5, 8, 12])
def test_dihedral_matches_polygon_symmetries(n):
    # r^i s^j acts on Z/n as x -> i + (-1)^j x; compose right to left
    G = dihedral(n)

    def act(k, x):
        i, j = k % n, k // n
        return (i + (-x if j else x)) % n

    for a in range(2 * n):
        for b in range(2 * n):
            ab = G.mul(a, b)
            assert all(act(ab, x) == act(a, act(b, x)) for x in range(n))


def test_d4_labels_and_generators():
    G = dihedral(4)
    assert list(G.labels) == ["1", "r", "r^2", "r^3", "s", "rs", "r^2s", "r^3s"]
    assert [G.label(g) for g in G.generators] == ["r", "s"]
    assert G.center == (0, 2)
    assert G.element_order(1) == 4 and G.element_order(4) == 2


@pytest.mark.parametrize("p,q", [(3, 2), (5, 2), (7, 2), (7, 3), (13, 3)])
def test_metacyclic_matches_affine_maps(p, q):
    # s^i t^j acts on Z/p as x -> i + d^j x
    G = metacyclic(p, q)
    d = G.meta["d"]
    assert multiplicative_order(d, p) == q
    assert G.order == p * q and not G.is_abelian

    def act(k, x):
        i, j = k % p, k // p
        return (i + pow(d, j, p) * x) % p

    for a in range(p * q):
        for b in range(p * q):
            assert all(act(G.mul(a, b), x) == act(a, act(b, x)) for x in range(p))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_symmetric_composes_right_to_left(n):
    G = symmetric(n)
    perms = G.meta["perms"]
    assert len(perms) == G.order == len(set(perms))
    for a in range(G.order):
        for b in range(G.order):
            assert perms[G.mul(a, b)] == tuple(perms[a][perms[b][x]] for x in range(n))


def test_alternating_is_even_part():
    A = alternating(5)
    assert A.order == 60
    assert all(parity(p) == 0 for p in A.meta["perms"])


@pytest.mark.parametrize(
    "name,sizes",
    [
        ("S3", [1, 2, 3]),
        ("D4", [1, 1, 2, 2, 2]),
        ("S4", [1, 3, 6, 6, 8]),
        ("A4", [1, 3, 4, 4]),
        ("A5", [1, 12, 12, 15, 20]),
        ("M7_3", [1, 3, 3, 7, 7]),
    ],
)
def test_conjugacy_class_sizes(name, sizes):
    G = group_by_name(name)
    classes = G.conjugacy_classes
    assert sorted(len(c) for c in classes) == sizes
    assert sorted(x for c in classes for x in c) == list(range(G.order))


def test_cycle_notation():
    assert cycle_notation((0, 1, 2, 3)) == "()"
    assert cycle_notation((1, 0, 3, 2)) == "(0 1)(2 3)"
    assert cycle_notation((1, 2, 0)) == "(0 1 2)"


def test_rejects_non_latin():
    with pytest.raises(NotLatinSquare):
        make_group_from_cayley([[0, 1], [0, 1]], name="bad")


def test_rejects_missing_identity():
    # x * y = -x - y mod 3 is Latin but has no identity
    with pytest.raises((NoIdentity, MissingInverse)):
        make_group_from_cayley([[0, 2, 1], [2, 1, 0], [1, 0, 2]], name="bad")


def test_rejects_non_associative_quasigroup():
    # a loop of order 5 that is not a group
    t = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAssociative):
        make_group_from_cayley(t, name="loop5")


@given(st.permutations(list(range(6))))
@settings(max_examples=40, deadline=None)
def test_relabelled_group_still_validates(perm):
    # conjugating S3's table by a bijection of indices yields a valid group
    G = group_by_name("S3")
    p = np.array(perm)
    pinv = np.argsort(p)
    table = p[G.cayley[pinv[:, None], pinv[None, :]]]
    H = make_group_from_cayley(table, name="S3'")
    assert H.order == 6 and not H.is_abelian
    assert sorted(len(c) for c in H.conjugacy_classes) == [1, 2, 3]


@given(st.sampled_from(SMALL), st.data())
@settings(max_examples=60, deadline=None)
def test_power_and_order(name, data):
    G = group_by_name(name)
    g = data.draw(st.integers(0, G.order - 1))
    k = G.element_order(g)
    assert G.power(g, k) == G.identity
    assert all(G.power(g, j) != G.identity for j in range(1, k))
    assert G.order % k == 0
