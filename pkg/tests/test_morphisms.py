import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpfybe.errors import BadPsi, NotBijective, NotHomomorphic, SearchBudgetExceeded
from fpfybe.groups import CATALOG, cyclic, dihedral, group_by_name
from fpfybe.morphisms import (
    GroupMap,
    are_brace_equivalent,
    automorphism_group,
    classify_fpf,
    conjugate_map,
    default_budget,
    enumerate_endomorphisms,
    enumerate_fpf,
    enumerate_homomorphisms,
    is_fpf_abelian,
    map_from_generators,
    require_fpf,
    same_regular_subgroup,
    trivial_map,
)

SMALL = [n for n in CATALOG if group_by_name(n).order <= 24]


def brute_force_endomorphisms(G):
    """Every image vector with f(1) = 1, filtered pair by pair."""
    n = G.order
    C = G.cayley
    others = [g for g in range(n) if g != G.identity]
    cand = np.array(list(itertools.product(range(n), repeat=len(others))), dtype=np.int64)
    full = np.zeros((len(cand), n), dtype=np.int64)
    full[:, others] = cand
    full[:, G.identity] = G.identity
    for a in range(n):
        for b in range(n):
            keep = full[:, C[a, b]] == C[full[:, a], full[:, b]]
            full = full[keep]
    return {tuple(int(x) for x in row) for row in full}


def test_d4_endomorphisms_match_brute_force():
    G = dihedral(4)
    found = {f.images for f in enumerate_endomorphisms(G)}
    assert found == brute_force_endomorphisms(G)
    assert len(found) == 36


@pytest.mark.parametrize("name", ["C2xC2", "S3", "C6", "D3"])
def test_small_endomorphisms_match_brute_force(name):
    G = group_by_name(name)
    assert {f.images for f in enumerate_endomorphisms(G)} == brute_force_endomorphisms(G)


@pytest.mark.parametrize("n", [1, 2, 5, 6, 8, 15])
def test_cyclic_endomorphisms(n):
    # x -> kx for each k mod n
    G = cyclic(n)
    assert len(enumerate_endomorphisms(G)) == n
    assert len(automorphism_group(G)) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
def test_dihedral_automorphism_count(n):
    phi = sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
    assert len(automorphism_group(dihedral(n))) == n * phi


def test_c6_fpf_by_hand():
    # x -> kx fixes nothing nonzero iff gcd(k - 1, 6) = 1, so k in {0, 2}
    G = cyclic(6)
    expect = {tuple((k * x) % 6 for x in range(6)) for k in range(6) if math.gcd(k - 1, 6) == 1}
    assert {f.images for f in enumerate_fpf(G)} == expect
    assert len(expect) == 2


@pytest.mark.parametrize("name,count", [("D4", 12), ("A4", 5), ("S4", None), ("D3", 1), ("D5", 1), ("A5", 1)])
def test_fpf_counts(name, count):
    maps = enumerate_fpf(group_by_name(name))
    assert maps[0] == trivial_map(group_by_name(name))
    if count is not None:
        assert len(maps) == count


def test_fpf_sorted_and_certified():
    for name in ["D4", "D6", "A4", "M7_3"]:
        maps = enumerate_fpf(group_by_name(name))
        assert [m.images for m in maps] == sorted(m.images for m in maps)
        for m in maps:
            assert m.is_homomorphism() and is_fpf_abelian(m).valid


def test_certificate_witnesses():
    G = dihedral(4)
    ident = GroupMap.from_images(G, range(8))
    cert = is_fpf_abelian(ident)
    assert not cert.valid
    assert cert.fixed_point_witness == 1
    assert cert.abelian_witness is not None
    with pytest.raises(BadPsi) as info:
        require_fpf(ident)
    assert info.value.certificate.fixed_point_witness == 1
    # abelian image but a fixed point: r -> r^2 ... not a homomorphism; use s -> s, r -> 1
    psi = map_from_generators(G, {1: 0, 4: 4})
    cert = is_fpf_abelian(psi)
    assert cert.abelian_witness is None and cert.fixed_point_witness == 4


def test_map_from_generators_rejects_bad_assignment():
    G = dihedral(4)
    with pytest.raises(NotHomomorphic):
        map_from_generators(G, {1: 4, 4: 1})  # s -> r has the wrong order


def test_inverse_of_non_bijection():
    with pytest.raises(NotBijective):
        trivial_map(dihedral(4)).inverse()


def test_budget_env(monkeypatch):
    monkeypatch.setenv("YBE_BUDGET", "3")
    assert default_budget() == 3
    with pytest.raises(SearchBudgetExceeded):
        enumerate_endomorphisms(group_by_name("S4"))
    monkeypatch.delenv("YBE_BUDGET")
    with pytest.raises(SearchBudgetExceeded):
        enumerate_homomorphisms(group_by_name("S4"), budget=2)


def test_hom_into_other_group():
    # Hom(C4, C2) has 2 elements, Hom(C2, C4) has 2, Hom(C3, C2) is trivial
    assert len(enumerate_homomorphisms(cyclic(4), cyclic(2))) == 2
    assert len(enumerate_homomorphisms(cyclic(2), cyclic(4))) == 2
    assert len(enumerate_homomorphisms(cyclic(3), cyclic(2))) == 1


@given(st.sampled_from(["D4", "D6", "A4", "S3", "M7_3", "C2xC4"]), st.data())
@settings(max_examples=40, deadline=None)
def test_conjugation_preserves_fpf(name, data):
    G = group_by_name(name)
    maps = enumerate_fpf(G)
    aut = automorphism_group(G)
    psi = data.draw(st.sampled_from(maps))
    phi = data.draw(st.sampled_from(aut))
    conj = conjugate_map(phi, psi)
    assert conj.is_homomorphism()
    assert is_fpf_abelian(conj).valid
    assert conj in maps
    found = are_brace_equivalent(psi, conj, aut)
    assert found is not None
    assert conjugate_map(found, psi) == conj


@pytest.mark.parametrize("name", ["D4", "D6", "D8", "A4", "S4", "M7_3", "C2xC2"])
def test_classification_partitions(name):
    cls = classify_fpf(group_by_name(name))
    n = len(cls.all_maps)
    for parts in (cls.brace_orbits, cls.subgroup_classes):
        flat = sorted(k for p in parts for k in p)
        assert flat == list(range(n))
    # orbit representative is the smallest member
    assert all(o[0] == min(o) for o in cls.brace_orbits)
    # trivial map is alone in its orbit
    assert cls.brace_orbits[0] == [0]


def test_a4_classification():
    cls = classify_fpf(group_by_name("A4"))
    assert len(cls.all_maps) == 5
    assert sorted(len(o) for o in cls.brace_orbits) == [1, 4]


def test_d4_example_pair():
    G = dihedral(4)
    psi1 = map_from_generators(G, {1: G.index_of("rs"), 4: G.index_of("rs")})
    psi2 = map_from_generators(G, {1: G.index_of("r^2s"), 4: 0})
    phi = map_from_generators(G, {1: 1, 4: G.index_of("r^3s")})
    # phi^-1 psi1 phi = psi2
    assert phi.inverse().compose(psi1).compose(phi) == psi2
    aut = automorphism_group(G)
    assert are_brace_equivalent(psi1, psi2, aut) is not None
    assert same_regular_subgroup(psi1, psi1)
