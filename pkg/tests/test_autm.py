from collections import Counter

import pytest

from stgq.autm import (
    RootSpec,
    ab1_equivalence,
    averaging_check,
    benson_check,
    centrality_check,
    core,
    fix_profile,
    iroot_group_family,
    left_coset_reps,
    moufang_iroot_check,
    mstgq_check,
    projection_lemma_check,
    property_star_check,
    property_star_family,
    semifield_type_check,
    structure_equiv_report,
    symmetries_with_center,
    transfer_check,
    verify_elation_group,
    whorls_about,
)
from stgq.grp import heisenberg


def test_symmetry_counts(wfam3, hfam):
    # t symmetries plus the identity
    assert len(symmetries_with_center(wfam3.geom, 0, wfam3.action)) == 3
    assert len(symmetries_with_center(hfam.geom, 0, hfam.action)) == 2


def test_elation_groups(wfam3, hfam, st2):
    for E in (wfam3, hfam, st2):
        r = verify_elation_group(E.geom, 0, E.action)
        assert r and r.parameters["order"] == E.K.group.order


def test_whorls_cover_action(st2):
    assert len(whorls_about(st2.geom, 0, st2.action)) == st2.K.group.order


def test_benson_symmetry_instance(wfam3):
    theta = symmetries_with_center(wfam3.geom, 0, wfam3.action)[1]
    r = benson_check(wfam3.geom, theta)
    p = r.parameters
    assert r.verdict
    assert (p["fix"], p["g"], p["lhs"], p["modulus"]) == (13, 0, 52, 6)
    assert p["lhs_mod"] == p["rhs_mod"] == 4


@pytest.mark.parametrize("name", ["wfam3", "hfam"])
def test_benson_all_elements(name, request):
    E = request.getfixturevalue(name)
    assert all(benson_check(E.geom, a) for a in E.action)


def test_taxonomy_w3(wfam3):
    c = Counter()
    for a in wfam3.action:
        fp = fix_profile(wfam3.geom, a, 0)
        assert len(fp.matches_241) == 1
        c[(fp.taxonomy_fix1, fp.taxonomy_241)] += 1
    # the two nontrivial symmetries, the other 24 non-identity elations, the identity
    assert c == {("i", "ii"): 2, ("iii", "ii'"): 24, ("not applicable", "iv"): 1}
    theta = symmetries_with_center(wfam3.geom, 0, wfam3.action)[1]
    fp = fix_profile(wfam3.geom, theta, 0)
    assert (fp.taxonomy_fix1, fp.taxonomy_241) == ("i", "ii")
    assert len(fp.fixed_points) == 13 and len(fp.fixed_lines) == 4


def test_taxonomy_h34(hfam):
    c = Counter()
    for a in hfam.action:
        fp = fix_profile(hfam.geom, a, 0)
        assert fp.taxonomy_241 in fp.matches_241
        c[fp.taxonomy_fix1] += 1
    assert c == {"iii": 18, "ii": 12, "i": 1, "not applicable": 1}


def test_transfer_h34(hfam):
    fp = fix_profile(hfam.geom, hfam.action[1], 0)
    r = transfer_check(fp, 4, 2, 2)
    assert r.verdict is True and r.parameters["congruence"]


def test_transfer_not_applicable_square(wfam3):
    fp = fix_profile(wfam3.geom, wfam3.action[1], 0)
    assert transfer_check(fp, 3, 3, 3).verdict == "not applicable"


@pytest.mark.parametrize("name", ["wfam3", "hfam"])
def test_star_and_ab1_agree(name, request):
    E = request.getfixturevalue(name)
    geo = property_star_check(E.geom, 0, E.action)
    grp = property_star_family(E.K)
    assert geo.verdict is True and grp.verdict is True
    r = ab1_equivalence(E.K.group, E.K.S, geo)
    assert r and r.parameters["quotient_abelian"]


def test_star_fails_on_st2(st2):
    geo = property_star_check(st2.geom, 0, st2.action)
    grp = property_star_family(st2.K)
    assert geo.verdict is False and grp.verdict is False
    r = ab1_equivalence(st2.K.group, st2.K.S, geo)
    assert r.verdict is True and r.parameters["quotient_abelian"] is False


def test_averaging_w3(wfam3):
    r = averaging_check(wfam3.geom, 0, wfam3.action)
    assert r and r.parameters["distribution"] == {"3/7": 24}


def test_moufang_st2_group_route(st2):
    assert iroot_group_family(st2.K, "inf").parameters["root_group_order"] == 4
    assert iroot_group_family(st2.K, "inf").verdict is True
    for lab in ("0", "1"):
        r = iroot_group_family(st2.K, lab)
        assert r.verdict is False and r.parameters["root_group_order"] == 2


def test_moufang_st2_geometry_route(st2):
    g = st2.geom
    # line j on the base point is [A] for the j-th label
    for j, expect in ((0, True), (1, False), (2, False)):
        y = int(next(p for p in g.lines[j] if p != 0))
        assert moufang_iroot_check(g, RootSpec((0, j, y)), st2.action).verdict is expect


def test_mstgq_st2_fails_only_mstgq1(st2):
    r = mstgq_check(st2.geom, 0, st2.action)
    ax = r.parameters["axioms"]
    assert not r and ax["MSTGQ1"] is False
    assert ax["MSTGQ2"] and ax["MSTGQ3"]


def test_mstgq_w3(wfam3):
    assert mstgq_check(wfam3.geom, 0, wfam3.action)


def test_structure_equiv_w3(wfam3):
    r = structure_equiv_report(wfam3.K, wfam3.geom, wfam3.action, 0)
    assert r and all(r.parameters["items"].values())
    assert len(r.parameters["items"]) == 5


def test_structure_equiv_rejects_even(hfam):
    with pytest.raises(ValueError):
        structure_equiv_report(hfam.K)


def test_projection_lemma_w3(wfam3):
    r = projection_lemma_check(wfam3.K.group, wfam3.K.S)
    assert r and r.parameters["Phi_equals_S"] and r.parameters["routes_agree"]


def test_centrality(wfam3, st2):
    assert centrality_check(wfam3.K.group, wfam3.K.S)
    assert centrality_check(st2.K.group, st2.K.S).parameters["S_order"] == 2


def test_semifield_pairs_heis1_3(wfam3):
    H, Fs = wfam3.K.group, wfam3.K.Fstar
    for i in range(len(Fs)):
        for j in range(len(Fs)):
            if i != j:
                assert semifield_type_check(H, Fs[i], Fs[j])


def test_semifield_rejects_equal_pair(wfam3):
    H, A = wfam3.K.group, wfam3.K.Fstar[0]
    assert not semifield_type_check(H, A, A)


def test_core_and_coset_reps():
    H = heisenberg(1, 3)
    from stgq.kantor import classical_w_family

    A = classical_w_family(3).F[0]
    assert core(H, A).order == 1
    reps = left_coset_reps(H, A)
    assert len(reps) == 9
    assert len({frozenset(int(H.mul(r, a)) for a in A.members) for r in reps}) == 9
