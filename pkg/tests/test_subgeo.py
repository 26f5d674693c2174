import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stgq.classical import build_h3
from stgq.gq import PointLineGeometry, dualize
from stgq.grp import Subgroup, frattini, quotient
from stgq.subgeo import (
    PcpSpec,
    comblem_plane,
    dual_net,
    f_factor_type,
    factor_analysis,
    find_subgqs,
    frattini_geometry,
    frattini_geometry_family,
    frattsub_hypotheses,
    pcp_verify,
    plane_completion,
    subgq_intersection_classify,
    subgq_plane,
    substructure_classify,
    twist,
    verify_affine_plane,
    verify_dual_net,
    verify_net,
    verify_projective_plane,
)


@pytest.fixture(scope="module")
def h_subs(h34):
    return find_subgqs(h34, (2, 2), 0)


@pytest.fixture(scope="module")
def tw(hfam):
    return twist(hfam.geom, 0, hfam.action)


def fano():
    return PointLineGeometry(7, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]])


def affine2():
    return PointLineGeometry(4, [[0, 1], [2, 3], [0, 2], [1, 3], [0, 3], [1, 2]])


def test_plane_checkers():
    assert verify_projective_plane(fano(), 2)
    assert verify_affine_plane(affine2(), 2)
    assert not verify_projective_plane(affine2())
    assert not verify_affine_plane(fano())


def test_dual_net_w3(w3):
    net = dual_net(w3, 0)
    assert (net.n_points, net.n_lines) == (12, 9)
    assert verify_dual_net(net.geom, 3, 4)
    # it is the dual of a net, not a net itself
    assert not verify_net(net.geom, 3, 4)
    P = plane_completion(net)
    assert (P.n_points, P.n_lines) == (13, 13)
    assert verify_projective_plane(P, 3)


def test_completion_needs_square_order():
    # H(3,4) has regular points but order (4, 2)
    net = dual_net(build_h3(2), 0)
    with pytest.raises(ValueError):
        plane_completion(net)


def test_comblem_planes_w3(w3):
    lines_x = [int(L) for L in np.nonzero(w3.inc[0])[0]]
    for X, Y in itertools.permutations(lines_x, 2):
        pl, r = comblem_plane(w3, X, Y)
        assert r and (pl.n_points, pl.n_lines) == (9, 12)


def test_subgq_routes_agree(h34, h_subs):
    assert len(h_subs) == 12
    net = find_subgqs(h34, (2, 2), 0, route="net")
    assert {S.key for S in net} == {S.key for S in h_subs}
    for S in h_subs:
        assert S.order == (2, 2) and len(S.points) == 15 and len(S.lines) == 15


def test_fixed_route_needs_points(h34):
    with pytest.raises(ValueError):
        find_subgqs(h34, (2, 2), 0, route="fixed")


def test_substructure_w2_in_dual(h34, h_subs):
    S = h_subs[0]
    assert substructure_classify(h34, S.points, S.lines).verdict == "invalid"
    D = dualize(h34)
    assert substructure_classify(D, S.lines, S.points).verdict == "4"


def test_intersection_classes(h34, h_subs):
    counts = {}
    for a, b in itertools.combinations(h_subs, 2):
        v = subgq_intersection_classify(h34, a, b).verdict
        counts[v] = counts.get(v, 0) + 1
    assert counts == {"3": 48, "2": 18}


def test_intersection_rejects_equal(h34, h_subs):
    with pytest.raises(ValueError):
        subgq_intersection_classify(h34, h_subs[0], h_subs[0])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 11), st.integers(0, 11))
def test_intersection_symmetric(i, j):
    if i == j:
        return
    h = build_h3(2)
    S = find_subgqs(h, (2, 2), 0)
    assert subgq_intersection_classify(h, S[i], S[j]).verdict == subgq_intersection_classify(h, S[j], S[i]).verdict


def test_case2_families_are_affine_planes(h34, h_subs):
    n = len(h_subs)
    adj = [[i != j and subgq_intersection_classify(h34, h_subs[i], h_subs[j]).verdict == "2" for j in range(n)] for i in range(n)]
    fams = [c for c in itertools.combinations(range(n), 4) if all(adj[a][b] for a, b in itertools.combinations(c, 2))]
    assert len(fams) == 3
    for c in fams:
        _, r = subgq_plane(h34, 0, [h_subs[k] for k in c])
        assert r and r.parameters["order"] == 2


def test_subgq_plane_rejects_small_family(h34, h_subs):
    with pytest.raises(ValueError):
        subgq_plane(h34, 0, h_subs[:3])


def test_twist_decomposition(hfam, tw):
    rp = tw.reports
    assert rp["S2_order"] == 64 and rp["second_case"] == 3 and rp["closed"]
    assert rp["elation"] and rp["isomorphic"] is False
    assert len(tw.H) == len(tw.Hminus) == 32
    assert [len(tw.H1), len(tw.H2), len(tw.H3), len(tw.H4)] == [16, 16, 16, 16]


def test_twist_theta_fixes_subgq(hfam, tw):
    th = tw.theta
    assert (th.points[th.points] == np.arange(len(th.points))).all()
    for p in tw.subgq.points:
        assert th.points[p] == p
    assert tw.subgq.order == (2, 2)


def test_twist_sylow_family(hfam, tw):
    fam = tw.sylow_family
    assert len(fam) == 4 and len({S.key for S in fam}) == 4
    pl, r = subgq_plane(hfam.geom, 0, fam)
    assert r and (pl.n_points, pl.n_lines) == (4, 6)


def test_twist_rejects_odd(wfam3):
    with pytest.raises(ValueError):
        twist(wfam3.geom, 0, wfam3.action)


def test_twist_rejects_st2(st2):
    with pytest.raises(ValueError):
        twist(st2.geom, 0, st2.action)


def test_frattini_two_routes(wfam3):
    K = wfam3.K
    grp = frattini_geometry_family(K)
    geo = frattini_geometry(wfam3.geom, 0, wfam3.action, frattini(K.group).members)
    assert grp.verdict is True and geo.verdict is True
    assert grp.parameters["points"] == geo.parameters["points"] == 9
    assert grp.parameters["lines_per_member"] == [3, 3, 3, 3]
    assert geo.parameters["lines"] == 12


def test_frattsub_w3(wfam3):
    r = frattsub_hypotheses(wfam3.K)
    assert r.parameters["a_dual_partial_linear"] and r.parameters["b_generation"]
    assert r.parameters["maximal_subgroups"] == 4


def test_f_factor_types(wfam3, hfam):
    K = wfam3.K
    a = f_factor_type(K, K.S)
    assert a.parameters["type"] == [1, 3] and a.parameters["case"] == "a"
    b = f_factor_type(K, K.group.whole())
    assert b.parameters["type"] == [3, 3] and b.parameters["case"] == "b"
    c = f_factor_type(hfam.K, frattini(hfam.K.group))
    assert c.parameters["X_order"] == 2 and c.parameters["type"] == [1, 2] and c.parameters["case"] == "a"


def _pcp(K):
    T, proj = quotient(K.group, K.S)
    return T, [Subgroup(T, np.unique(proj[A.members])) for A in K.F]


def test_pcp_w3(wfam3):
    T, comps = _pcp(wfam3.K)
    r, net = pcp_verify(PcpSpec(T, comps))
    assert r and r.parameters["s"] == 3 and r.parameters["r"] == 4
    assert (net.n_points, net.n_lines) == (9, 12)
    assert {len(L) for L in net.lines} == {3}


def test_pcp_rejects_two_components(wfam3):
    T, comps = _pcp(wfam3.K)
    with pytest.raises(ValueError):
        pcp_verify(PcpSpec(T, comps[:2]))


def test_factor_analysis(wfam3, hfam):
    r = factor_analysis(wfam3.K.group, wfam3.K.S, wfam3.K.F)
    assert r.verdict == "AI" and r.parameters["elementary_abelian"]
    assert factor_analysis(hfam.K.group, hfam.K.S, hfam.K.F).verdict == "AI"
