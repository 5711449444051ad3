import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpfybe import io as fio
from fpfybe.braces import build_brace
from fpfybe.families import FamilySpec
from fpfybe.groups import CATALOG, cyclic, dihedral, group_by_name
from fpfybe.morphisms import classify_fpf, enumerate_fpf
from fpfybe.perms import opposite_regular_subgroup, regular_subgroup
from fpfybe.ybe import closed_form_R, closed_form_Rprime, is_bijective, swap_map, verify_braid

SMALL = [n for n in CATALOG if group_by_name(n).order <= 24]
WITH_MAPS = ["D4", "D6", "A4", "S4", "M7_3", "C6", "C2xC2"]


def roundtrip(d):
    return json.loads(json.dumps(d))


@pytest.mark.parametrize("name", SMALL)
def test_group_roundtrip(name):
    G = group_by_name(name)
    d = fio.group_to_dict(G)
    assert set(d) == {"name", "order", "labels", "cayley"}
    H = fio.group_from_dict(roundtrip(d))
    assert H == G and H.labels == G.labels


@given(st.sampled_from(WITH_MAPS), st.data())
@settings(max_examples=40, deadline=None)
def test_map_brace_subgroup_solution_roundtrip(name, data):
    G = group_by_name(name)
    psi = data.draw(st.sampled_from(enumerate_fpf(G)))
    d = fio.map_to_dict(psi)
    assert set(d) == {"group", "images"}
    assert fio.map_from_dict(roundtrip(d)) == psi

    B = build_brace(G, psi)
    bd = fio.brace_to_dict(B)
    assert {"group", "psi", "circle", "bar"} <= set(bd)
    assert fio.brace_from_dict(roundtrip(bd)).same_tables(B)

    N = regular_subgroup(G, psi)
    for M in (N, opposite_regular_subgroup(N)):
        sd = fio.subgroup_to_dict(M)
        assert {"group", "members", "labels"} <= set(sd)
        assert fio.subgroup_from_dict(roundtrip(sd)) == M

    R = data.draw(st.sampled_from([closed_form_R, closed_form_Rprime]))(G, psi)
    jd = fio.solution_to_dict(R)
    assert {"group", "psi", "provenance", "entries"} <= set(jd)
    back = fio.solution_from_dict(roundtrip(jd))
    assert back.same_table(R) and back.provenance == R.provenance and back.psi == psi
    assert fio.solution_from_csv(fio.solution_to_csv(R), G).same_table(R)
    assert fio.solution_from_grid(fio.parse_table(fio.solution_to_table(R)), G).same_table(R)
    M = fio.export_rmatrix(R)
    assert fio.rmatrix_to_ybe(fio.rmatrix_from_dict(roundtrip(fio.rmatrix_to_dict(M))), G).same_table(R)
    assert fio.rmatrix_from_dict(json.loads(fio.rmatrix_to_json(M))) == M


@pytest.mark.parametrize("name", WITH_MAPS)
def test_classification_roundtrip(name):
    cls = classify_fpf(group_by_name(name))
    d = fio.classification_to_dict(cls)
    back = fio.classification_from_dict(roundtrip(d))
    assert [m.images for m in back.all_maps] == [m.images for m in cls.all_maps]
    assert back.brace_orbits == cls.brace_orbits
    assert back.subgroup_classes == cls.subgroup_classes
    assert all(set(o) == {"representative", "members"} for o in d["orbits"])


def test_solution_entries_use_labels():
    G = dihedral(4)
    R = closed_form_R(G, enumerate_fpf(G)[1])
    e = fio.solution_to_dict(R)["entries"][1]
    assert e["in"] == ["1", "r"]
    assert all(isinstance(x, str) for x in e["out"])


def test_swap_on_c2_matrix():
    M = fio.export_rmatrix(swap_map(cyclic(2)))
    assert M.dimension == 4
    assert M.entries == ((0, 0), (1, 2), (2, 1), (3, 3))


def test_trivial_group_matrix():
    M = fio.export_rmatrix(swap_map(cyclic(1)))
    assert M.dimension == 1 and M.dense().tolist() == [[1]]


@pytest.mark.parametrize("name", WITH_MAPS + ["D8", "M13_3"])
def test_rprime_matrix_is_transpose(name):
    G = group_by_name(name)
    for psi in enumerate_fpf(G):
        M = fio.export_rmatrix(closed_form_R(G, psi))
        Mp = fio.export_rmatrix(closed_form_Rprime(G, psi))
        assert M.is_permutation()
        assert Mp == M.transpose()
        assert np.array_equal(Mp.dense(), M.dense().T)


def test_d4_matrix_size():
    G = dihedral(4)
    M = fio.export_rmatrix(closed_form_R(G, enumerate_fpf(G)[1]))
    assert M.dimension == 64 and len(M.entries) == 64


def test_outputs_are_byte_stable():
    G = dihedral(6)
    psi = enumerate_fpf(G)[3]
    a = fio.solution_to_table(closed_form_R(G, psi))
    b = fio.solution_to_table(closed_form_R(G, psi))
    assert a == b
    assert json.dumps(fio.solution_to_dict(closed_form_R(G, psi))) == json.dumps(fio.solution_to_dict(closed_form_R(G, psi)))


def test_family_spec_roundtrip():
    for spec in [FamilySpec("dihedral-gamma", (8, 2)), FamilySpec("symmetric-tau", (5,), (1, 0, 3, 2, 4)), FamilySpec("trivial", group="D4")]:
        assert fio.family_spec_from_dict(roundtrip(fio.family_spec_to_dict(spec))) == spec


def test_incomplete_grid_rejected():
    G = cyclic(2)
    rows = fio.solution_to_grid(swap_map(G))[:-1]
    with pytest.raises(ValueError):
        fio.solution_from_grid(rows, G)


def test_transcribed_d4_table_differs_in_one_cell(d4_fixture):
    G = dihedral(4)
    ref = fio.solution_from_grid(d4_fixture, G)
    psi = next(m for m in enumerate_fpf(G) if m.describe() == "r->rs, s->rs")
    ours = closed_form_R(G, psi)
    diff = np.argwhere((ref.first != ours.first) | (ref.second != ours.second))
    assert [(G.label(int(g)), G.label(int(h))) for g, h in diff] == [("r^2s", "s")]
    # the transcribed cell repeats an output pair, so that table is not even a bijection
    assert not is_bijective(ref) and not verify_braid(ref)
    assert is_bijective(ours) and verify_braid(ours)
