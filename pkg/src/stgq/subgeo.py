"""Substructures: dual nets, planes, subquadrangles, twisting, Frattini
geometry, F-factors and partial congruence partitions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .autm import (
    _substructure_order,
    left_coset_reps,
    verify_elation_group,
)
from .gq import (
    GeometryAutomorphism,
    PointLineGeometry,
    ar1_check,
    automorphisms_fixing,
    dualize,
    closure_of,
    is_closed,
    regularity,
    span,
)
from .grp import (
    FiniteGroup,
    Subgroup,
    center,
    frattini,
    group_from_permutations,
    group_isomorphic,
    lower_central_series,
    maximal_subgroups,
    normality_witness,
    quotient,
)
from .kantor import KantorFamily, verify_kantor_family
from .report import Report

__all__ = [
    "DualNet",
    "SubGQ",
    "TwistDecomposition",
    "PcpSpec",
    "verify_net",
    "verify_dual_net",
    "verify_affine_plane",
    "verify_projective_plane",
    "dual_net",
    "plane_completion",
    "substructure_classify",
    "ideal_closure",
    "full_closure",
    "find_subgqs",
    "subgq_intersection_classify",
    "subgq_plane",
    "twist",
    "comblem_plane",
    "frattini_geometry",
    "frattini_geometry_family",
    "f_factor_type",
    "frattsub_hypotheses",
    "pcp_verify",
    "factor_analysis",
    "subgroup_as_group",
]


def _order(geom: PointLineGeometry) -> tuple[int, int]:
    if geom.order is None:
        raise ValueError("geometry must be a verified GQ")
    return geom.order


# ---------------------------------------------------------------- planes and nets


def verify_net(g: PointLineGeometry, order: int, degree: int) -> Report:
    """Net of order n and degree r: n^2 points, lines of size n, r lines per
    point, two points on at most one line, and a unique parallel to each
    line through each point off it."""
    n, r = order, degree
    inc = g.inc
    w = []
    if g.n_points != n * n:
        w.append({"reason": "point count", "points": g.n_points, "expected": n * n})
    ls = inc.sum(axis=0)
    pd = inc.sum(axis=1)
    if not (ls == n).all():
        w.append({"reason": "line size", "sizes": sorted(set(ls.tolist()))})
    if not (pd == r).all():
        w.append({"reason": "point degree", "degrees": sorted(set(pd.tolist()))})
    ii = inc.astype(np.int64)
    pp = ii @ ii.T
    np.fill_diagonal(pp, 0)
    if (pp > 1).any():
        a, b = np.argwhere(pp > 1)[0]
        w.append({"reason": "two lines through two points", "points": [int(a), int(b)]})
    if not w:
        meet = (ii.T @ ii) > 0  # lines sharing a point (or equal)
        par = ~meet
        # lines through p parallel to L, for p off L
        cnt = ii @ par.astype(np.int64)
        if not (cnt[~inc] == 1).all():
            p, L = np.argwhere((cnt != 1) & ~inc)[0]
            w.append({"reason": "parallel axiom", "point": int(p), "line": int(L), "parallels": int(cnt[p, L])})
    return Report("subgeo.net", g.name, not w, w, {"order": n, "degree": r, "points": g.n_points, "lines": g.n_lines})


def verify_dual_net(g: PointLineGeometry, order: int, degree: int) -> Report:
    """The dual of g is a net of the given order and degree."""
    r = verify_net(dualize(g), order, degree)
    r.check = "subgeo.dual_net"
    r.subject = g.name
    return r


def verify_affine_plane(g: PointLineGeometry, n: int | None = None) -> Report:
    if n is None:
        n = int(round(g.n_points**0.5))
    r = verify_net(g, n, n + 1)
    r.check = "subgeo.affine_plane"
    r.parameters["parallel_classes"] = n + 1 if r.verdict else None
    return r


def verify_projective_plane(g: PointLineGeometry, n: int | None = None) -> Report:
    """Any two points on exactly one line, any two lines meet once, n+1 per line."""
    if n is None:
        n = int(g.inc.sum(axis=0)[0]) - 1
    ii = g.inc.astype(np.int64)
    w = []
    if g.n_points != n * n + n + 1 or g.n_lines != n * n + n + 1:
        w.append({"reason": "counts", "points": g.n_points, "lines": g.n_lines})
    pp = ii @ ii.T
    np.fill_diagonal(pp, 1)
    ll = ii.T @ ii
    np.fill_diagonal(ll, 1)
    if not (pp == 1).all():
        w.append({"reason": "two points not on exactly one line"})
    if not (ll == 1).all():
        w.append({"reason": "two lines not meeting once"})
    has_quad = n >= 2
    return Report("subgeo.projective_plane", g.name, not w and has_quad, w, {"order": n})


@dataclass
class DualNet:
    base: PointLineGeometry
    x: int
    points: np.ndarray  # base point ids, x^perp minus x
    lines: list[np.ndarray]  # spans, as base point ids
    geom: PointLineGeometry  # on local indices

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_lines(self) -> int:
        return len(self.lines)


def _spans_in(geom: PointLineGeometry, pts: np.ndarray, include_collinear: bool) -> list[np.ndarray]:
    C = geom.collinear
    seen = {}
    for a, b in itertools.combinations(pts, 2):
        if C[a, b] and not include_collinear:
            continue
        sp = span(geom, int(a), int(b))
        k = sp.tobytes()
        if k not in seen:
            seen[k] = sp
    return sorted(seen.values(), key=lambda v: tuple(v))


def dual_net(geom: PointLineGeometry, x: int) -> DualNet:
    """Pi(x): points x^perp minus x, lines the spans of noncollinear pairs."""
    s, t = _order(geom)
    if not regularity(geom, x, "point"):
        raise ValueError(f"point {x} is not regular")
    pm = geom.collinear[x].copy()
    pm[x] = False
    pts = np.nonzero(pm)[0]
    spans = _spans_in(geom, pts, include_collinear=False)
    local = {int(p): i for i, p in enumerate(pts)}
    g = PointLineGeometry(len(pts), [[local[int(p)] for p in sp] for sp in spans], name=f"Pi({x}) of {geom.name}")
    return DualNet(geom, x, pts, spans, g)


def plane_completion(net: DualNet) -> PointLineGeometry:
    """Points x^perp, lines all spans of distinct pairs in x^perp (s = t)."""
    geom, x = net.base, net.x
    s, t = _order(geom)
    if s != t:
        raise ValueError("plane completion needs s = t")
    pts = np.nonzero(geom.collinear[x])[0]
    spans = _spans_in(geom, pts, include_collinear=True)
    local = {int(p): i for i, p in enumerate(pts)}
    g = PointLineGeometry(len(pts), [[local[int(p)] for p in sp] for sp in spans], name=f"completed Pi({x}) of {geom.name}")
    g.base_points = pts
    return g


# ---------------------------------------------------------------- substructures


def substructure_classify(geom: PointLineGeometry, P, B) -> Report:
    """The four cases for a substructure closed under joining and carrying
    s+1 points on each of its lines: "1" dual grid, "2" pencil, "3"
    coclique, "4" subquadrangle of order (s, t')."""
    s, t = _order(geom)
    P = np.unique(np.asarray(P, dtype=np.int64))
    B = np.unique(np.asarray(B, dtype=np.int64))
    inc = geom.inc
    Bset = set(B.tolist())
    for a, b in itertools.combinations(P, 2):
        if geom.collinear[a, b]:
            L = geom.line_through(int(a), int(b))
            if L not in Bset:
                return Report("subgeo.substructure", geom.name, "invalid", [{"condition": "i", "points": [int(a), int(b)], "line": int(L)}], {})
    for L in B:
        k = int(inc[P, L].sum())
        if k != s + 1:
            return Report("subgeo.substructure", geom.name, "invalid", [{"condition": "ii", "line": int(L), "points_in_P": k}], {})
    order = _substructure_order(geom, P, B)
    if order is not None and order[0] == s and order[0] >= 1 and (order[1] >= 2 or s == 1):
        if s == 1:
            return Report("subgeo.substructure", geom.name, "1", [], {"order": list(order)})
        return Report("subgeo.substructure", geom.name, "4", [], {"order": list(order)})
    if len(B) == 0:
        sub = geom.collinear[np.ix_(P, P)].copy()
        np.fill_diagonal(sub, False)
        if not sub.any():
            return Report("subgeo.substructure", geom.name, "3", [], {"points": len(P)})
    if len(B):
        common = np.nonzero(inc[:, B].all(axis=1))[0]
        if len(common) == 1:
            on = np.nonzero(inc[:, B].any(axis=1))[0]
            if set(on.tolist()) == set(P.tolist()):
                return Report("subgeo.substructure", geom.name, "2", [], {"point": int(common[0]), "lines": len(B)})
    return Report("subgeo.substructure", geom.name, "none", [], {"order": order})


@dataclass
class SubGQ:
    points: np.ndarray
    lines: np.ndarray
    order: tuple[int, int]

    @property
    def key(self) -> bytes:
        return self.points.tobytes()

    def __eq__(self, other) -> bool:
        return isinstance(other, SubGQ) and np.array_equal(self.points, other.points) and np.array_equal(self.lines, other.lines)

    def __hash__(self) -> int:
        return hash(self.key)


def ideal_closure(geom: PointLineGeometry, seed) -> np.ndarray:
    """Smallest point set containing ``seed`` and {y,z}^perp for each of
    its noncollinear pairs (ideal subquadrangles are closed this way)."""
    C = geom.collinear
    P = np.zeros(geom.n_points, dtype=bool)
    P[list(seed)] = True
    done = set()
    while True:
        idx = np.nonzero(P)[0]
        new = P.copy()
        for a, b in itertools.combinations(idx, 2):
            if (a, b) in done or C[a, b]:
                continue
            done.add((a, b))
            new |= C[a] & C[b]
        if (new == P).all():
            return idx
        P = new


def full_closure(geom: PointLineGeometry, seed) -> np.ndarray:
    """Smallest point set containing ``seed`` and every point of every line
    joining two of its collinear points."""
    inc, C = geom.inc, geom.collinear
    P = np.zeros(geom.n_points, dtype=bool)
    P[list(seed)] = True
    while True:
        idx = np.nonzero(P)[0]
        sub = C[np.ix_(idx, idx)]
        lines = set()
        for i, j in zip(*np.nonzero(np.triu(sub, 1))):
            lines.add(geom.line_through(int(idx[i]), int(idx[j])))
        new = P.copy()
        for L in lines:
            new |= inc[:, L]
        if (new == P).all():
            return idx
        P = new


def _as_subgq(geom: PointLineGeometry, pts: np.ndarray) -> SubGQ | None:
    cnt = geom.inc[pts].sum(axis=0)
    B = np.nonzero(cnt >= 2)[0]
    o = _substructure_order(geom, pts, B)
    if o is None or len(pts) == geom.n_points:
        return None
    return SubGQ(np.asarray(pts, dtype=np.int64), B, o)


def find_subgqs(
    geom: PointLineGeometry,
    target_order: tuple[int, int] | None = None,
    x: int = 0,
    route: str = "closure",
    seed=None,
    fixed=None,
    limit: int = 64,
) -> list[SubGQ]:
    """Proper subquadrangles through x, deduplicated and sorted.

    closure: ideal closure ({y,z}^perp) when t' = t, else full closure
             (lines joining collinear points); seeds are {x, y, z} with
             y ~ x and z opposite x, or the given ``seed``.
    fixed:   fixed structures of involutions among the automorphisms
             fixing the point set ``fixed`` pointwise.
    net:     affine subplanes of order t of the net at x, lifted by ideal
             closure.
    """
    s, t = _order(geom)
    C = geom.collinear
    found: dict[bytes, SubGQ] = {}

    def keep(pts):
        sg = _as_subgq(geom, pts)
        if sg is None:
            return
        if target_order is not None and sg.order != tuple(target_order):
            return
        if sg.order[0] < 2 or sg.order[1] < 2:
            return
        found.setdefault(sg.key, sg)

    ideal = target_order is None or target_order[1] == t
    close = ideal_closure if ideal else full_closure
    if route == "closure":
        if seed is not None:
            keep(close(geom, seed))
        else:
            px = np.nonzero(C[x])[0]
            px = px[px != x]
            for z in np.nonzero(~C[x])[0]:
                for y in px:
                    keep(close(geom, [x, int(y), int(z)]))
    elif route == "fixed":
        if fixed is None:
            raise ValueError("the fixed route needs a point set to fix")
        for a in automorphisms_fixing(geom, fixed, limit=limit):
            if a.is_identity() or a.order() != 2:
                continue
            P, B = a.fixed_points(), a.fixed_lines()
            o = _substructure_order(geom, P, B)
            if o is not None and o[0] >= 2 and o[1] >= 2 and (target_order is None or o == tuple(target_order)):
                found.setdefault(P.tobytes(), SubGQ(P, B, o))
    elif route == "net":
        for pts in _net_subplanes(geom, x):
            keep(ideal_closure(geom, [x] + list(pts)))
    else:
        raise ValueError(f"unknown route {route}")
    return sorted(found.values(), key=lambda g: tuple(g.points))


def _net_subplanes(geom: PointLineGeometry, x: int):
    """Point sets of x^perp giving affine subplanes of order t in the net at x
    (t points chosen on each line through x, t^2 full spans)."""
    s, t = _order(geom)
    if not regularity(geom, x, "point"):
        return
    net = dual_net(geom, x)
    spans = [set(v.tolist()) for v in net.lines]
    groups = [[int(p) for p in np.nonzero(geom.inc[:, L])[0] if p != x] for L in np.nonzero(geom.inc[x])[0]]
    for choice in itertools.product(*[itertools.combinations(gr, t) for gr in groups]):
        chosen = set(itertools.chain.from_iterable(choice))
        inside = [sp for sp in spans if sp <= chosen]
        if len(inside) != t * t:
            continue
        deg = {p: sum(p in sp for sp in inside) for p in chosen}
        if all(d == t for d in deg.values()):
            yield sorted(chosen)


def subgq_intersection_classify(geom: PointLineGeometry, S1: SubGQ, S2: SubGQ) -> Report:
    """Intersection of two ideal subquadrangles of order t in a GQ of order
    (t^2, t): "1" t^2+1 pairwise nonconcurrent lines, "2" a line with its
    points and their lines, "3" a GQ of order (1, t)."""
    s, t = _order(geom)
    for S in (S1, S2):
        if S.order != (t, t) or s != t * t:
            raise ValueError("expected ideal subquadrangles of order t in a GQ of order (t^2, t)")
    if S1 == S2:
        raise ValueError("the two subquadrangles must be distinct")
    P = np.intersect1d(S1.points, S2.points)
    B = np.intersect1d(S1.lines, S2.lines)
    params = {"common_points": len(P), "common_lines": len(B)}
    D = geom.concurrent
    if len(P) == 0 and len(B) == t * t + 1:
        sub = D[np.ix_(B, B)].copy()
        np.fill_diagonal(sub, False)
        if not sub.any():
            return Report("subgeo.subgq_intersection", geom.name, "1", [], params)
    for L in B:
        on = S1.points[geom.inc[S1.points, L]]
        lines_on = np.nonzero(geom.inc[on].any(axis=0))[0]
        lines_on = np.intersect1d(lines_on, S1.lines)
        if np.array_equal(np.sort(on), P) and np.array_equal(lines_on, B):
            params.update({"line": int(L), "points": [int(p) for p in P]})
            return Report("subgeo.subgq_intersection", geom.name, "2", [], params)
    o = _substructure_order(geom, P, B)
    if o == (1, t):
        return Report("subgeo.subgq_intersection", geom.name, "3", [], params)
    return Report("subgeo.subgq_intersection", geom.name, "other", [], params)


def subgq_plane(geom: PointLineGeometry, x: int, family: Sequence[SubGQ]):
    """Pi(K): the subquadrangles as points, the sets S cap M (M on x) as
    lines, incidence by containment.  Returns (plane, report)."""
    s, t = _order(geom)
    if len(family) != t * t:
        raise ValueError(f"family must have t^2 = {t * t} members, got {len(family)}")
    for a, b in itertools.combinations(range(len(family)), 2):
        r = subgq_intersection_classify(geom, family[a], family[b])
        if r.verdict != "2":
            raise ValueError(f"members {a} and {b} meet in case {r.verdict}, not in a line pencil")
    sets = {}
    for S in family:
        for M in np.nonzero(geom.inc[x])[0]:
            on = S.points[geom.inc[S.points, M]]
            sets.setdefault(on.tobytes(), on)
    keys = sorted(sets, key=lambda k: tuple(sets[k]))
    lines = []
    for k in keys:
        N = set(sets[k].tolist())
        lines.append([i for i, S in enumerate(family) if N <= set(S.points.tolist())])
    plane = PointLineGeometry(len(family), lines, name=f"Pi(K) in {geom.name}")
    return plane, verify_affine_plane(plane, t)


# ---------------------------------------------------------------- twisting


@dataclass
class TwistDecomposition:
    theta: GeometryAutomorphism
    H: list
    H1: list
    H2: list
    H3: list
    H4: list
    Hminus: list
    subgq: SubGQ
    sylow_family: list
    reports: dict = field(default_factory=dict)


def _perm(a: GeometryAutomorphism, n_points: int) -> np.ndarray:
    return np.concatenate([a.points, n_points + a.lines])


def _fixer_size(geom, action, x, L, y):
    lx = np.nonzero(geom.inc[x])[0]
    ly = np.nonzero(geom.inc[y])[0]
    pL = np.nonzero(geom.inc[:, L])[0]
    return sum(
        1
        for a in action
        if (a.lines[lx] == lx).all() and (a.lines[ly] == ly).all() and (a.points[pL] == pL).all()
    )


def twist(
    geom: PointLineGeometry,
    x: int,
    action: Sequence[GeometryAutomorphism],
    theta: GeometryAutomorphism | None = None,
) -> TwistDecomposition:
    """H^- = H1 u theta(H minus H1) from an involution theta fixing a subGQ
    of order (s', q) pointwise, for an elation group H of a GQ of order (q^2, q)."""
    s, t = _order(geom)
    q = t
    if s != q * q or q % 2:
        raise ValueError("twisting needs a GQ of order (q^2, q) with q even")
    n = geom.n_points
    Hg, perms = group_from_permutations([_perm(a, n) for a in action], name="H")
    if Hg.order != len(action):
        raise ValueError("action is not closed")
    if Hg.is_abelian():
        raise ValueError("H is abelian: no twist")
    # second hypothesis
    sizes = {}
    for L in np.nonzero(geom.inc[x])[0]:
        for y in np.nonzero(geom.inc[:, L])[0]:
            if y != x:
                sizes[(int(L), int(y))] = _fixer_size(geom, action, x, int(L), int(y))
    Z = center(Hg)
    sq = np.asarray(Hg.mul(Hg.elements, Hg.elements), dtype=np.int64)
    hyp = {"root_groups_q2": all(v == q * q for v in sizes.values()), "squares_central": bool(Z.mask[sq].all())}
    if not all(hyp.values()):
        raise ValueError(f"second hypothesis fails: {hyp}")
    subgq = None
    if theta is None:
        for S in find_subgqs(geom, (q, q), x=x):
            for a in automorphisms_fixing(geom, S.points, limit=4):
                if not a.is_identity():
                    theta, subgq = a, S
                    break
            if theta is not None:
                break
        if theta is None:
            raise ValueError("no nontrivial automorphism fixes a subGQ of order q pointwise")
    else:
        P, B = theta.fixed_points(), theta.fixed_lines()
        o = _substructure_order(geom, P, B)
        if o is None or o[1] != q or o[0] < 2:
            raise ValueError("theta does not fix a subGQ of order (s', q), s' > 1, pointwise")
        subgq = SubGQ(P, B, o)
    if theta.is_identity() or theta.order() != 2:
        raise ValueError("theta must be an involution")
    lx = np.nonzero(geom.inc[x])[0]
    if not (theta.lines[lx] == lx).all():
        raise ValueError("theta must fix x linewise")
    S2 = closure_of(list(action) + [theta])
    if len(S2) != 2 * len(action):
        raise ValueError(f"<H, theta> has order {len(S2)}, expected {2 * len(action)}")
    Hkeys = {a.key for a in action}
    family = []
    for a in S2:
        if a.key in Hkeys or a.order() != 2:
            continue
        o = _substructure_order(geom, a.fixed_points(), a.fixed_lines())
        if o is not None and o[1] == q and o[0] >= 2:
            family.append((a, SubGQ(a.fixed_points(), a.fixed_lines(), o)))
    GS, sperms = group_from_permutations([_perm(a, n) for a in S2[1:]], name="S2")
    by_key = {_perm(a, n).tobytes(): a for a in S2}
    autos = [by_key[p.tobytes()] for p in sperms]
    Hm = Subgroup(GS, [i for i, a in enumerate(autos) if a.key in Hkeys])
    inv_idx = [i for i, a in enumerate(autos) if any(a == b for b, _ in family)]
    cands = [M for M in maximal_subgroups(GS) if M.order == Hm.order and M != Hm]
    second = [M for M in cands if all(M.mask[i] for i in inv_idx)]
    if not second:
        raise ValueError("no index-2 subgroup containing the involutions")
    Hpp = second[0]
    th_i = next(i for i, a in enumerate(autos) if a == theta)
    H1 = [autos[i] for i in np.nonzero(Hpp.mask & Hm.mask)[0]]
    H4 = [autos[i] for i in np.nonzero(Hm.mask & ~Hpp.mask)[0]]
    H2 = [autos[i] for i in np.nonzero(Hpp.mask & ~Hm.mask)[0]]
    H3 = [theta * h for h in H4]
    Hminus = H1 + H3
    reps = {
        "second_hypothesis": hyp,
        "S2_order": len(S2),
        "candidates": len(cands),
        "second_case": len(second),
        "closed": is_closed(Hminus) is None,
        "elation": verify_elation_group(geom, x, Hminus),
    }
    Gm, _ = group_from_permutations([_perm(a, n) for a in Hminus], name="H-")
    iso = group_isomorphic(Hg, Gm)
    reps["isomorphic"] = iso.verdict
    reps["invariant"] = iso.invariant
    reps["Hminus_group"] = Gm
    reps["H_group"] = Hg
    return TwistDecomposition(theta, list(action), H1, H2, H3, H4, Hminus, subgq, [S for _, S in family], reps)


# ---------------------------------------------------------------- Pi(X, Y)


def comblem_plane(geom: PointLineGeometry, X: int, Y: int):
    """Pi(X,Y) for concurrent lines X, Y meeting in z.  Returns (plane, report)."""
    s, t = _order(geom)
    D, inc = geom.concurrent, geom.inc
    if X == Y or not D[X, Y]:
        raise ValueError("X and Y must be distinct concurrent lines")
    z = int(np.nonzero(inc[:, X] & inc[:, Y])[0][0])
    ar = ar1_check(geom, z, pair=(Y, X))
    if not ar["verdict"]:
        raise ValueError(f"(AR1) fails with respect to X and Y: {ar}")
    pts = [int(L) for L in np.nonzero(D[X] & ~inc[z])[0]]
    local = {L: i for i, L in enumerate(pts)}
    ptset = set(pts)
    lines = {}
    for Zl in np.nonzero(D[Y] & ~inc[z])[0]:
        members = [int(L) for L in np.nonzero(D[Zl] & D[X])[0] if L != Y and L != Zl]
        members = [L for L in members if L in ptset]
        k = tuple(sorted(members))
        lines.setdefault(k, [local[L] for L in k])
    for u in np.nonzero(inc[:, X])[0]:
        if u == z:
            continue
        k = tuple(sorted(int(L) for L in np.nonzero(inc[u])[0] if L != X))
        lines.setdefault(k, [local[L] for L in k])
    plane = PointLineGeometry(len(pts), [lines[k] for k in sorted(lines)], name=f"Pi({X},{Y}) of {geom.name}")
    rep = verify_affine_plane(plane, s)
    rep.parameters["z"] = z
    return plane, rep


# ---------------------------------------------------------------- Frattini geometry, F-factors


def subgroup_as_group(G: FiniteGroup, X: Subgroup) -> tuple[FiniteGroup, dict]:
    """X as a group on 0..|X|-1 (identity first), with the index map."""
    m = X.members
    pos = {int(g): i for i, g in enumerate(m)}
    lut = np.full(G.order, -1, dtype=np.int64)
    lut[m] = np.arange(len(m))
    table = lut[np.asarray(G.mul(m[:, None], m[None, :]), dtype=np.int64)]
    return FiniteGroup(len(m), table=table, name=f"subgroup of order {len(m)} in {G.name}"), pos


def _coset_labels(G: FiniteGroup, N: Subgroup) -> np.ndarray:
    """Label each element by the index of its left coset gN."""
    lab = np.full(G.order, -1, dtype=np.int64)
    k = 0
    for r in left_coset_reps(G, N):
        lab[np.asarray(G.mul(r, N.members), dtype=np.int64)] = k
        k += 1
    return lab


def _frattini_coords(H: FiniteGroup, Phi: Subgroup):
    """Coordinates over GF(p) of each element in H/Phi (elementary abelian)."""
    p = H.prime()
    lab = _coset_labels(H, Phi)
    gens = H.generators()
    d = len(gens)
    if p ** d != H.order // Phi.order:
        raise ValueError("generators do not give a basis of H/Phi")
    coords = np.zeros((p**d, d), dtype=np.int64)
    elems = np.zeros(1, dtype=np.int64)
    vecs = np.zeros((1, 0), dtype=np.int64)
    for g in gens:
        pw = [0]
        for _ in range(p - 1):
            pw.append(int(H.mul(pw[-1], g)))
        new_e = np.asarray(H.mul(elems[:, None], np.array(pw)[None, :]), dtype=np.int64).ravel()
        new_v = np.concatenate([np.repeat(vecs, p, axis=0), np.tile(np.arange(p), len(elems))[:, None]], axis=1)
        elems, vecs = new_e, new_v
    coords[lab[elems]] = vecs
    if len(np.unique(lab[elems])) != p**d:
        raise ValueError("generator products miss some cosets")
    return coords[lab], p, d


def _rank_mod_p(M: np.ndarray, p: int) -> int:
    M = np.array(M, dtype=np.int64) % p
    r = 0
    rows, cols = M.shape if M.size else (0, 0)
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
    return r


def frattini_geometry(geom: PointLineGeometry, x: int, action: Sequence[GeometryAutomorphism], Phi_elements) -> Report:
    """Gamma(Phi) from the geometry: points are Phi-orbits of affine points,
    lines Phi-orbits on the points of x^perp minus x, incidence when some
    members are collinear."""
    s, t = _order(geom)
    C = geom.collinear
    phi = [action[int(g)] for g in Phi_elements]

    def orbits(pts):
        seen = {}
        out = []
        for p in pts:
            if p in seen:
                continue
            orb = sorted({int(a.points[p]) for a in phi})
            for v in orb:
                seen[v] = len(out)
            out.append(orb)
        return out

    aff = [int(p) for p in np.nonzero(~C[x])[0]]
    px = [int(p) for p in np.nonzero(C[x])[0] if p != x]
    P = orbits(aff)
    L = orbits(px)
    inc = np.zeros((len(P), len(L)), dtype=bool)
    for i, u in enumerate(P):
        cu = C[u].any(axis=0)
        for j, V in enumerate(L):
            inc[i, j] = bool(cu[V].any())
    deg = inc.sum(axis=1)
    ii = inc.astype(np.int64)
    ll = ii.T @ ii
    np.fill_diagonal(ll, 0)
    pp = ii @ ii.T
    np.fill_diagonal(pp, 0)
    dual_pls = bool((ll <= 1).all())
    params = {
        "points": len(P),
        "lines": len(L),
        "line_orbit_sizes": sorted({len(v) for v in L}),
        "point_degrees": sorted(set(deg.tolist())),
        "degree_t_plus_1": bool((deg == t + 1).all()),
        "dual_partial_linear": dual_pls,
        "partial_linear": bool((pp <= 1).all()),
        "route": "geometry",
    }
    return Report("subgeo.frattini_geometry", geom.name, dual_pls, [], params)


def frattini_geometry_family(K: KantorFamily, Phi: Subgroup | None = None) -> Report:
    """Gamma(Phi) inside the group: points are the cosets of Phi, the lines
    for member A are the cosets of Phi A*, incidence is containment.  It is
    a dual partial linear space iff Phi A* cap Phi B* = Phi for A != B."""
    H = K.group
    Phi = frattini(H) if Phi is None else Phi
    coords, p, d = _frattini_coords(H, Phi)
    dims = []
    for As in K.Fstar:
        dims.append(_rank_mod_p(coords[As.members], p))
    bad = []
    n = len(K.F)
    for i, j in itertools.combinations(range(n), 2):
        both = _rank_mod_p(np.vstack([coords[K.Fstar[i].members], coords[K.Fstar[j].members]]), p)
        if both != dims[i] + dims[j]:
            bad.append({"members": [K.labels[i], K.labels[j]], "shared_dimension": dims[i] + dims[j] - both})
    params = {
        "Phi_order": Phi.order,
        "points": p**d,
        "lines_per_member": [p ** (d - k) for k in dims],
        "dual_partial_linear": not bad,
        "route": "group",
    }
    ff = f_factor_type(K, Phi)
    params["f_factor"] = {"verdict": ff.verdict, "type": ff.parameters.get("type"), "case": ff.parameters.get("case")}
    return Report("subgeo.frattini_geometry", K.name or H.name, not bad, bad[:3], params)


def f_factor_type(K: KantorFamily, X: Subgroup) -> Report:
    """Whether X is an F-factor, its type (sigma, tau), and the case of the
    Hachenberger dichotomy it lands in ("a" or "b")."""
    G = K.group
    fam = list(K.F) + list(K.Fstar)
    xm = X.mask
    factor = True
    wit = []
    for U, V in itertools.combinations(fam, 2):
        uv = U.order * V.order // int((U.mask & V.mask).sum())
        if uv != G.order:
            continue
        a, b, c = int((U.mask & xm).sum()), int((V.mask & xm).sum()), int((U.mask & V.mask & xm).sum())
        if a * b // c != X.order:
            factor = False
            wit.append({"orders": [U.order, V.order], "product_in_X": a * b // c})
            break
    sig = {int((A.mask & xm).sum()) for A in K.F}
    st = {int((A.mask & xm).sum()) for A in K.Fstar}
    params = {"F_factor": factor, "X_order": X.order}
    if len(sig) != 1 or len(st) != 1:
        params["type"] = None
        return Report("subgeo.f_factor", K.name or G.name, False, wit + [{"reason": "no type"}], params)
    sigma = sig.pop()
    tau = st.pop() // sigma
    params["type"] = [sigma, tau]
    if not factor:
        return Report("subgeo.f_factor", K.name or G.name, False, wit, params)
    if sigma * sigma * tau != X.order:
        params["case"] = None
        return Report("subgeo.f_factor", K.name or G.name, False, [{"reason": "|X| != sigma^2 tau"}], params)
    if sigma == 1:
        inter = np.logical_and.reduce([A.mask for A in K.Fstar])
        ok = X.order == tau <= K.t and bool(inter[X.members].all())
        params["case"] = "a"
    else:
        Xg, pos = subgroup_as_group(G, X)
        Fx = [Subgroup(Xg, [pos[int(g)] for g in A.members if xm[g]]) for A in K.F]
        Fsx = [Subgroup(Xg, [pos[int(g)] for g in A.members if xm[g]]) for A in K.Fstar]
        r = verify_kantor_family(Xg, Fx, Fsx, sigma, tau)
        ok = tau == K.t and bool(r)
        params["case"] = "b"
        params["induced_family"] = r.verdict
    return Report("subgeo.f_factor", K.name or G.name, ok, wit, params)


def frattsub_hypotheses(K: KantorFamily, Phi: Subgroup | None = None) -> Report:
    """Hypothesis (b): for A != B and every maximal K not containing A,
    <A cap K, B> != H; decided in H/Phi where maximal subgroups are kernels
    of nonzero functionals.  Hypothesis (a) is the dual partial linear space
    test of Gamma(Phi)."""
    H = K.group
    Phi = frattini(H) if Phi is None else Phi
    coords, p, d = _frattini_coords(H, Phi)
    funcs = [np.array(v) for v in itertools.product(range(p), repeat=d) if any(v) and v[next(i for i in range(d) if v[i])] == 1]
    hyp_b = True
    wit = []
    for i, j in itertools.permutations(range(len(K.F)), 2):
        ca, cb = coords[K.F[i].members], coords[K.F[j].members]
        rb = cb
        for f in funcs:
            va = (ca @ f) % p
            if not va.any():
                continue  # A inside this maximal subgroup
            gen = np.vstack([ca[va == 0], rb])
            if _rank_mod_p(gen, p) == d:
                hyp_b = False
                wit.append({"A": K.labels[i], "B": K.labels[j], "functional": f.tolist()})
                break
        if not hyp_b:
            break
    a = frattini_geometry_family(K, Phi)
    params = {"a_dual_partial_linear": a.verdict, "b_generation": hyp_b, "maximal_subgroups": len(funcs), "Phi_order": Phi.order}
    return Report("subgeo.frattsub", K.name or H.name, a.verdict or hyp_b, wit, params)


# ---------------------------------------------------------------- PCPs


@dataclass
class PcpSpec:
    group: FiniteGroup
    components: list[Subgroup]


def pcp_verify(spec: PcpSpec):
    """(s, r)-PCP axioms and the translation net (points G, lines G_i g).
    Returns (report, net geometry or None)."""
    G, comps = spec.group, spec.components
    r = len(comps)
    s = int(round(G.order**0.5))
    if r < 3:
        raise ValueError("a PCP has at least 3 components")
    w = []
    if s * s != G.order:
        w.append({"reason": "|G| is not a square"})
    for i, C in enumerate(comps):
        if C.order != s:
            w.append({"reason": "component order", "component": i, "order": C.order})
    for i, j in itertools.combinations(range(r), 2):
        if int((comps[i].mask & comps[j].mask).sum()) * G.order != comps[i].order * comps[j].order:
            w.append({"reason": "G_i G_j != G", "components": [i, j]})
    if w:
        return Report("subgeo.pcp", G.name, False, w, {"s": s, "r": r}), None
    lines = []
    for C in comps:
        seen = set()
        for g in range(G.order):
            cos = tuple(sorted(int(v) for v in np.asarray(G.mul(C.members, g))))
            if cos not in seen:
                seen.add(cos)
                lines.append(list(cos))
    net = PointLineGeometry(G.order, lines, name=f"translation net of {G.name}")
    nr = verify_net(net, s, r)
    params = {"s": s, "r": r, "net_points": net.n_points, "net_lines": net.n_lines, "line_size": s, "net_verified": nr.verdict}
    normal = [i for i, C in enumerate(comps) if normality_witness(G, C) is None]
    params["normal_components"] = normal
    if len(normal) >= 2:
        # both normal components: all components isomorphic
        base = comps[normal[0]]
        bg, _ = subgroup_as_group(G, base)
        params["components_isomorphic"] = all(
            bool(group_isomorphic(bg, subgroup_as_group(G, C)[0])) for C in comps
        )
    return Report("subgeo.pcp", G.name, bool(nr), nr.witnesses, params), net


def _factorizes(N_mask: np.ndarray, comps: list[Subgroup]) -> bool:
    n = int(N_mask.sum())
    for a, b in itertools.combinations(comps, 2):
        x, y, z = int((a.mask & N_mask).sum()), int((b.mask & N_mask).sum()), int((a.mask & b.mask & N_mask).sum())
        if x * y // z != n:
            return False
    return True


def factor_analysis(H: FiniteGroup, S: Subgroup, F: Sequence[Subgroup]) -> Report:
    """AI (H/S abelian) or AII (H/S of class 2) with the factorization test:
    Omega_p for a non-elementary AI, Z(H/S) for AII."""
    T, proj = quotient(H, S)
    comps = [Subgroup(T, np.unique(proj[A.members])) for A in F]
    pcp, _ = pcp_verify(PcpSpec(T, comps))
    p = H.prime()
    params = {"T_order": T.order, "pcp": pcp.verdict}
    if T.is_abelian():
        params["kind"] = "AI"
        orders = T.element_orders()
        elem = bool((orders[1:] == p).all()) if T.order > 1 else True
        params["elementary_abelian"] = elem
        if not elem:
            om = np.zeros(T.order, dtype=bool)
            om[orders <= p] = True
            omega = Subgroup.from_mask(T, om)
            params["Omega_p_order"] = omega.order
            params["factorizes"] = _factorizes(omega.mask, comps)
        return Report("subgeo.factor_analysis", H.name, "AI", [], params)
    cls = len(lower_central_series(T)) - 1
    params["class"] = cls
    if cls == 2:
        params["kind"] = "AII"
        Z = center(T)
        params["center_order"] = Z.order
        params["factorizes"] = _factorizes(Z.mask, comps)
        return Report("subgeo.factor_analysis", H.name, "AII", [], params)
    params["kind"] = "other"
    return Report("subgeo.factor_analysis", H.name, "other", [], params)
