"""Acceptance criteria, one test each; the summary prints PASS/FAIL per criterion."""
import itertools
import time

import numpy as np
import pytest

from oracles import Field
from stgq.autm import (
    RootSpec,
    ab1_equivalence,
    averaging_check,
    benson_check,
    fix_profile,
    moufang_iroot_check,
    mstgq1_family_sampled,
    projection_lemma_check,
    property_star_check,
    property_star_family,
    semifield_type_check,
    structure_equiv_report,
    symmetries_with_center,
    verify_elation_group,
)
from stgq.classical import build_h3, build_w
from stgq.gq import PointLineGeometry, ar1_check, gq_isomorphic, property_g, regular_points, regularity, verify_gq
from stgq.grp import (
    Subgroup,
    abelian_subgroups_of_order,
    ban_check,
    center,
    chi_form,
    derived_subgroup,
    heisenberg,
    quotient,
    structure_profile,
    suzuki_tits_matrix_check,
)
from stgq.kantor import (
    classical_w_family,
    coset_geometry,
    search_kantor_families,
    suzuki_tits_family,
    verify_kantor_family,
    verify_stgq_family,
)
from stgq.subgeo import (
    PcpSpec,
    comblem_plane,
    dual_net,
    factor_analysis,
    pcp_verify,
    plane_completion,
    subgq_plane,
    twist,
    verify_dual_net,
    verify_projective_plane,
)

acceptance = pytest.mark.acceptance


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f} s, limit {self.limit} s"


@acceptance(1, "Heisenberg structure")
def test_c01_heisenberg_structure():
    for n, q, exp in [(1, 3, 3), (1, 5, 5), (2, 2, 4), (2, 3, 3)]:
        with Clock(5):
            G = heisenberg(n, q)
            P = structure_profile(G)
            Z = {G.encode((0,) * n + (c,) + (0,) * n) for c in range(q)}
            assert {int(z) for z in P.center.members} == Z and P.center.order == q
            assert P.derived.key == P.center.key
            assert P.nilpotency_class == 2
            assert P.exponent == exp


@acceptance(2, "BAN-form on H_2(3)")
def test_c02_ban_form():
    with Clock(5):
        r = ban_check(chi_form(heisenberg(2, 3)), 3)
    for k in ("biadditive_left", "biadditive_right", "alternating", "nondegenerate", "fq_bilinear"):
        assert r[k] is True, k
    assert r["verdict"]


@acceptance(3, "W(3) model")
def test_c03_w3():
    with Clock(10):
        g = build_w(3)
        v = verify_gq(g)
        assert v.ok and v.order == (3, 3)
        assert (g.n_points, g.n_lines) == (40, 40)
        assert len(regular_points(g)) == 40
        assert all(len(symmetries_with_center(g, x)) == 3 for x in range(40))


@acceptance(4, "Kantor round trip for W(3)")
def test_c04_kantor_round_trip():
    with Clock(60):
        K = classical_w_family(3)
        g, action = coset_geometry(K)
        assert gq_isomorphic(g, build_w(3)).verdict is True
        assert verify_elation_group(g, 0, action)
        assert verify_stgq_family(K)
        Z = center(K.group)
        assert K.S.order == 3 and K.S == Z


@acceptance(5, "H(3,4) model")
def test_c05_h34():
    with Clock(300):
        h = build_h3(2)
        v = verify_gq(h)
        assert v.ok and v.order == (4, 2)
        assert (h.n_points, h.n_lines) == (45, 27)
        assert regularity(h, 0, "point")
        fams = search_kantor_families(heisenberg(2, 2), 4, 2)
        assert fams
        g, _ = coset_geometry(fams[0])
        assert gq_isomorphic(g, h).verdict is True
        r = property_g(h, 0)
        assert r["verdict"] and r["triads_checked"] > 0


@acceptance(6, "Benson congruence")
def test_c06_benson(wfam3, hfam):
    with Clock(30):
        for E in (wfam3, hfam):
            assert all(benson_check(E.geom, a) for a in E.action)
        theta = symmetries_with_center(wfam3.geom, 0, wfam3.action)[1]
        p = benson_check(wfam3.geom, theta).parameters
        assert (p["fix"], p["g"], p["modulus"]) == (13, 0, 6)
        assert p["lhs_mod"] == p["rhs_mod"] == 4


@acceptance(7, "Fixed-point taxonomy")
def test_c07_taxonomy(wfam3, hfam):
    with Clock(30):
        for E in (wfam3, hfam):
            syms = {tuple(a.points) for a in symmetries_with_center(E.geom, 0, E.action)}
            for a in E.action:
                fp = fix_profile(E.geom, a, 0)
                if a.is_identity():
                    continue
                assert isinstance(fp.taxonomy_fix1, str) and fp.taxonomy_fix1 in ("i", "ii", "iii")
                assert isinstance(fp.taxonomy_241, str) and fp.taxonomy_241 in fp.matches_241
                if tuple(a.points) in syms:
                    assert (fp.taxonomy_fix1, fp.taxonomy_241) == ("i", "ii")


@acceptance(8, "Property (*) and ab1 agree")
def test_c08_star_ab1(wfam3, hfam, st8):
    with Clock(600):
        for E in (wfam3, hfam):
            star = property_star_check(E.geom, 0, E.action)
            assert star.verdict is True
            r = ab1_equivalence(E.K.group, E.K.S, star)
            assert r.verdict is True and r.parameters["quotient_abelian"] is True
        star = property_star_family(st8)
        assert star.verdict is False and star.witnesses[0]["element"] is not None
        r = ab1_equivalence(st8.group, st8.S, star)
        assert r.verdict is True and r.parameters["quotient_abelian"] is False


@acceptance(9, "Averaging on W(3)")
def test_c09_averaging(wfam3):
    with Clock(30):
        r = averaging_check(wfam3.geom, 0, wfam3.action)
    assert r.verdict is True
    assert r.parameters["stabilizers"] > 0
    assert set(r.parameters["distribution"]) == {"3/7"}


@acceptance(10, "(AR1), comblem planes and the dual net of W(3)")
def test_c10_ar1_planes(w3):
    with Clock(60):
        assert ar1_check(w3, 0)["verdict"]
        lines_x = [int(L) for L in np.nonzero(w3.inc[0])[0]]
        for X, Y in itertools.permutations(lines_x, 2):
            _, r = comblem_plane(w3, X, Y)
            assert r and r.parameters["order"] == 3
        net = dual_net(w3, 0)
        assert (net.n_points, net.n_lines) == (12, 9)
        assert verify_dual_net(net.geom, 3, 4)
        assert verify_projective_plane(plane_completion(net), 3)


@acceptance(11, "Semifield type and abelian subgroup count in H_1(3)")
def test_c11_semifield():
    with Clock(30):
        K = classical_w_family(3)
        H = K.group
        for i, j in itertools.permutations(range(len(K.Fstar)), 2):
            assert semifield_type_check(H, K.Fstar[i], K.Fstar[j])
        assert len(abelian_subgroups_of_order(heisenberg(1, 3), 9)) == 4


@acceptance(12, "Moufang structure equivalences on W(3)")
def test_c12_structure_equiv(wfam3):
    with Clock(30):
        r = structure_equiv_report(wfam3.K, wfam3.geom, wfam3.action, 0)
        assert len(r.parameters["items"]) == 5 and all(r.parameters["items"].values())
        p = projection_lemma_check(wfam3.K.group, wfam3.K.S)
        assert p and p.parameters["Phi_equals_S"]


@acceptance(13, "Twisting on H(3,4)")
def test_c13_twist(hfam):
    with Clock(600):
        tw = twist(hfam.geom, 0, hfam.action)
        th = tw.theta
        n = len(th.points)
        assert not th.is_identity() and (th.points[th.points] == np.arange(n)).all()
        assert all(th.points[p] == p for p in tw.subgq.points)
        sub = PointLineGeometry(
            len(tw.subgq.points),
            [[int(np.searchsorted(tw.subgq.points, p)) for p in hfam.geom.lines[L]
              if p in set(tw.subgq.points.tolist())] for L in tw.subgq.lines],
        )
        assert gq_isomorphic(sub, build_w(2)).verdict is True
        assert len(tw.sylow_family) == 4
        _, r = subgq_plane(hfam.geom, 0, tw.sylow_family)
        assert r and r.parameters["order"] == 2
        assert verify_elation_group(hfam.geom, 0, tw.Hminus)
        assert tw.reports["isomorphic"] is False


@acceptance(14, "Suzuki-Tits suite at q = 8")
def test_c14_suzuki_tits(st8):
    with Clock(900):
        G = st8.group
        assert G.order == 32768
        assert (st8.s, st8.t) == (64, 8)
        assert verify_kantor_family(G, st8.F, st8.Fstar, 64, 8)
        assert verify_stgq_family(st8)
        assert st8.S == center(G) and st8.S.order == 8
        Ainf = st8.Fstar[st8.labels.index("inf")]
        A1 = st8.Fstar[st8.labels.index("1")]
        assert Ainf.is_elementary_abelian() and Ainf.is_normal()
        assert not A1.is_abelian() and A1.exponent() == 4 and not A1.is_normal()
        m = suzuki_tits_matrix_check(G, samples=10**6)
        assert m["verdict"] and m["checked"] == 10**6
        D = derived_subgroup(G)
        assert D.issubset(Ainf) and D.order < Ainf.order


@acceptance(15, "Moufang locality for the Suzuki-Tits family")
def test_c15_moufang(st2, st8):
    with Clock(900):
        g = st2.geom
        # line 0 on the base point is [A(inf)]
        for y in g.lines[0]:
            if y != 0:
                assert moufang_iroot_check(g, RootSpec((0, 0, int(y))), st2.action)
        r = mstgq1_family_sampled(st8)
        assert r.verdict is False
        failing = {w["iroot"][1] for w in r.witnesses}
        assert "[Ainf]" not in failing and len(failing) == 8


@acceptance(16, "PCP for W(3)")
def test_c16_pcp(wfam3):
    with Clock(30):
        K = wfam3.K
        T, proj = quotient(K.group, K.S)
        comps = [Subgroup(T, np.unique(proj[A.members])) for A in K.F]
        r, net = pcp_verify(PcpSpec(T, comps))
        assert r and r.parameters["s"] == 3 and r.parameters["r"] == 4
        f = factor_analysis(K.group, K.S, K.F)
        assert f.verdict == "AI" and f.parameters["elementary_abelian"]
        assert all(len(L) == 9 for L in net.lines)
