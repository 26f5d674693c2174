import pytest

from oracles import kantor_axioms
from stgq.gq import gq_isomorphic, verify_gq
from stgq.grp import cyclic_group, elementary_abelian, heisenberg
from stgq.kantor import (
    CosetGeometry,
    KantorFamily,
    classical_w_family,
    coset_geometry,
    search_kantor_families,
    suzuki_tits_family,
    verify_kantor_family,
    verify_stgq_family,
)


def oracle_axioms(K):
    G = K.group
    els = list(range(G.order))
    mul = lambda a, b: int(G.mul(a, b))
    F = [set(int(g) for g in A.members) for A in K.F]
    Fs = [set(int(g) for g in A.members) for A in K.Fstar]
    return kantor_axioms(els, mul, F, Fs, K.s, K.t)


@pytest.mark.parametrize("name", ["wfam3", "hfam", "st2"])
def test_families_agree_with_oracle(name, request):
    K = request.getfixturevalue(name).K
    assert oracle_axioms(K)
    assert verify_kantor_family(K.group, K.F, K.Fstar, K.s, K.t)


@pytest.mark.parametrize("name,order", [("wfam3", 3), ("hfam", 2), ("st2", 2)])
def test_stgq_kernel(name, order, request):
    K = request.getfixturevalue(name).K
    r = verify_stgq_family(K)
    assert r and r.parameters["S_order"] == order
    S = {int(g) for g in K.S.members}
    for i, A in enumerate(K.Fstar):
        for j, B in enumerate(K.Fstar):
            if i != j:
                assert {int(g) for g in A.members} & {int(g) for g in B.members} == S


def test_duplicate_member_fails(wfam3):
    K = wfam3.K
    F = [K.F[0], K.F[0], K.F[2], K.F[3]]
    r = verify_kantor_family(K.group, F, K.Fstar, 3, 3)
    assert not r
    assert r.parameters["axioms"]["c"] is False
    bad = KantorFamily(K.group, F, K.Fstar, 3, 3)
    assert not oracle_axioms(bad)


def test_wrong_order_fails(wfam3):
    K = wfam3.K
    assert not verify_kantor_family(K.group, K.F, K.Fstar, 3, 2)


def test_coset_counts(wfam3, hfam, st2):
    for E in (wfam3, hfam, st2):
        s, t = E.K.s, E.K.t
        assert E.geom.n_points == (s + 1) * (s * t + 1)
        assert E.geom.n_lines == (t + 1) * (s * t + 1)
        assert len(E.action) == E.K.group.order
        assert verify_gq(E.geom).order == (s, t)


def test_coset_geometry_object(wfam3):
    C = CosetGeometry(wfam3.K)
    assert (C.n_points, C.n_lines) == (40, 40)


def test_w3_round_trip(wfam3, w3):
    assert gq_isomorphic(wfam3.geom, w3).verdict is True


def test_h3_round_trip(hfam, h34):
    assert gq_isomorphic(hfam.geom, h34).verdict is True


def test_action_preserves_incidence(hfam):
    for a in hfam.action[:16]:
        assert a.preserves(hfam.geom)


def test_cyclic_group_has_no_family():
    assert search_kantor_families(cyclic_group(8), 2, 2) == []


def test_e8_unique_family():
    fams = search_kantor_families(elementary_abelian(2, 3), 2, 2)
    assert len(fams) == 1
    assert verify_stgq_family(fams[0])
    assert oracle_axioms(fams[0])


def test_e16_family_not_skew_translation():
    fams = search_kantor_families(elementary_abelian(2, 4), 2, 4)
    assert len(fams) == 1
    K = fams[0]
    assert verify_kantor_family(K.group, K.F, K.Fstar, 2, 4)
    r = verify_stgq_family(K)
    assert not r and r.witnesses[0]["reason"] == "intersection not constant"


def test_search_w3_count():
    fams = search_kantor_families(heisenberg(1, 3), 3, 3)
    assert fams and all(oracle_axioms(K) for K in fams)


@pytest.mark.parametrize("q", [4, 5])
def test_suzuki_tits_family_rejects(q):
    with pytest.raises(ValueError):
        suzuki_tits_family(q)


@pytest.mark.parametrize("q", [2, 4])
def test_classical_family_rejects_even(q):
    with pytest.raises(ValueError):
        classical_w_family(q)


def test_classical_family_q5():
    K = classical_w_family(5)
    assert verify_stgq_family(K)
    g, _ = coset_geometry(K)
    assert verify_gq(g).order == (5, 5)
