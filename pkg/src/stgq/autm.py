"""Automorphism-level analysis of elation quadrangles.

Automorphisms are explicit point/line permutations (``GeometryAutomorphism``);
an *action* is a list of them, normally closed under composition.  Every
analysis takes the base point ``x`` explicitly; "affine" means opposite x
(points) or not incident with x (lines).

Checks that need a group of order beyond the coset-geometry limit (the
Suzuki-Tits group at q = 8) have group-level counterparts working directly
on the Kantor family: a point kA* is fixed by g iff k^-1 g k lies in A*,
and a line rA is fixed by g iff r^-1 g r lies in A.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gq import (
    GeometryAutomorphism,
    PointLineGeometry,
    automorphisms_fixing,
    is_closed,
    perp_mask,
)
from .grp import (
    FiniteGroup,
    Subgroup,
    center,
    derived_subgroup,
    frattini,
    maximal_subgroups,
    normality_witness,
    product_set,
    quotient,
)
from .kantor import KantorFamily
from .report import Report

__all__ = [
    "FixProfile",
    "RootSpec",
    "whorls_about",
    "symmetries_with_center",
    "verify_elation_group",
    "benson_check",
    "fix_profile",
    "classify_fixed_structure",
    "property_star_check",
    "property_star_family",
    "ab1_equivalence",
    "centrality_check",
    "moufang_iroot_check",
    "m_x_check",
    "mstgq_check",
    "iroot_group_family",
    "mstgq1_family_sampled",
    "averaging_check",
    "transfer_check",
    "semifield_type_check",
    "structure_equiv_report",
    "projection_lemma_check",
    "left_coset_reps",
    "core",
]


def _order(geom: PointLineGeometry) -> tuple[int, int]:
    if geom.order is None:
        raise ValueError("geometry must be a verified GQ")
    return geom.order


def _lines_on(geom: PointLineGeometry, p: int) -> np.ndarray:
    return np.nonzero(geom.inc[p])[0]


def _points_on(geom: PointLineGeometry, L: int) -> np.ndarray:
    return np.nonzero(geom.inc[:, L])[0]


def _fixes_lines_on(a: GeometryAutomorphism, geom: PointLineGeometry, p: int) -> bool:
    ls = _lines_on(geom, p)
    return bool((a.lines[ls] == ls).all())


def _fixes_points_on(a: GeometryAutomorphism, geom: PointLineGeometry, L: int) -> bool:
    ps = _points_on(geom, L)
    return bool((a.points[ps] == ps).all())


# ---------------------------------------------------------------- whorls, symmetries


def whorls_about(geom: PointLineGeometry, x: int, action: Sequence[GeometryAutomorphism]) -> list[int]:
    """Indices of the members of ``action`` fixing every line on x."""
    bad = is_closed(action)
    if bad is not None:
        raise ValueError(f"action not closed: product of members {bad[0]} and {bad[1]} is missing")
    return [i for i, a in enumerate(action) if _fixes_lines_on(a, geom, x)]


def symmetries_with_center(geom: PointLineGeometry, x: int, action=None) -> list[GeometryAutomorphism]:
    """Whorls about x fixing x^perp pointwise.

    With no action given, all such automorphisms of the geometry are found
    by search (they fix every line on x automatically).
    """
    pm = perp_mask(geom, [x])
    if action is None:
        return list(automorphisms_fixing(geom, np.nonzero(pm)[0]))
    keep = np.nonzero(pm)[0]
    return [a for a in action if (a.points[keep] == keep).all() and _fixes_lines_on(a, geom, x)]


def verify_elation_group(geom: PointLineGeometry, x: int, action: Sequence[GeometryAutomorphism]) -> Report:
    """Whorls about x acting sharply transitively on the points opposite x."""
    s, t = _order(geom)
    subj = geom.name
    w = []
    if len(action) != s * s * t:
        w.append({"reason": "size", "size": len(action), "expected": s * s * t})
        return Report("autm.elation_group", subj, False, w, {"x": x})
    bad = is_closed(action)
    if bad is not None:
        w.append({"reason": "not closed", "pair": list(bad)})
        return Report("autm.elation_group", subj, False, w, {"x": x})
    for i, a in enumerate(action):
        if not _fixes_lines_on(a, geom, x):
            w.append({"reason": "not a whorl", "element": i})
            return Report("autm.elation_group", subj, False, w, {"x": x})
    aff = np.nonzero(~geom.collinear[x])[0]
    base = int(aff[0])
    images = np.array([a.points[base] for a in action])
    if geom.collinear[x, images].any() or len(np.unique(images)) != len(aff):
        w.append({"reason": "not sharply transitive on affine points", "base": base, "orbit": int(len(np.unique(images)))})
        return Report("autm.elation_group", subj, False, w, {"x": x})
    return Report("autm.elation_group", subj, True, [], {"x": x, "order": len(action), "affine_points": len(aff)})


# ---------------------------------------------------------------- Benson, fixed structures


def benson_check(geom: PointLineGeometry, theta: GeometryAutomorphism) -> Report:
    """(t+1)|fix| + g = st+1 mod s+t, where g counts points sent to a
    different collinear point."""
    s, t = _order(geom)
    pts = np.arange(geom.n_points)
    img = theta.points
    fix = int((img == pts).sum())
    g = int((geom.collinear[pts, img] & (img != pts)).sum())
    lhs = (t + 1) * fix + g
    rhs = s * t + 1
    m = s + t
    ok = lhs % m == rhs % m
    return Report(
        "autm.benson",
        theta.name or "automorphism",
        ok,
        [] if ok else [{"lhs": lhs, "rhs": rhs}],
        {"fix": fix, "g": g, "lhs": lhs, "rhs": rhs, "modulus": m, "lhs_mod": lhs % m, "rhs_mod": rhs % m},
    )


def _substructure_order(geom: PointLineGeometry, P: np.ndarray, B: np.ndarray):
    """(s', t') when (P, B) with induced incidence is a GQ (grids allowed)."""
    if len(P) == 0 or len(B) == 0:
        return None
    sub = geom.inc[np.ix_(P, B)]
    pl = sub.sum(axis=0)
    lp = sub.sum(axis=1)
    if len(set(pl.tolist())) != 1 or len(set(lp.tolist())) != 1 or pl[0] < 2 or lp[0] < 2:
        return None
    si = sub.astype(np.int64)
    col = (si @ si.T) > 0
    np.fill_diagonal(col, False)
    cnt = col.astype(np.int64) @ si
    if not (cnt[~sub] == 1).all():
        return None
    return int(pl[0] - 1), int(lp[0] - 1)


CASES_241 = ("iv", "iii", "iii'", "ii", "ii'", "i", "i'")


def classify_fixed_structure(geom: PointLineGeometry, P: np.ndarray, B: np.ndarray) -> tuple[str | None, list[str], tuple | None]:
    """Cases of the fixed-structure theorem matched by (P, B).

    Returns (assigned case, all matching cases, substructure order).  The
    assigned case is the first match in the order (iv), (iii), (iii'),
    (ii), (ii'), (i), (i'), so each structure gets exactly one.
    """
    P = np.asarray(P, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    C, D, inc = geom.collinear, geom.concurrent, geom.inc
    matches = []
    order = _substructure_order(geom, P, B)
    if order is not None:
        s1, t1 = order
        if s1 >= 2 and t1 >= 2:
            matches.append("iv")
        if t1 == 1:
            matches.append("iii")
        if s1 == 1:
            matches.append("iii'")
    if len(P):
        for p in P:
            if C[p, P].all() and inc[p, B].all():
                matches.append("ii")
                break
    if len(B):
        for L in B:
            if D[L, B].all() and inc[P, L].all():
                matches.append("ii'")
                break
    if len(B) == 0:
        sub = C[np.ix_(P, P)].copy()
        np.fill_diagonal(sub, False)
        if not sub.any():
            matches.append("i")
    if len(P) == 0:
        sub = D[np.ix_(B, B)].copy()
        np.fill_diagonal(sub, False)
        if not sub.any():
            matches.append("i'")
    assigned = next((c for c in CASES_241 if c in matches), None)
    return assigned, matches, order


@dataclass
class FixProfile:
    fixed_points: list[int]
    fixed_lines: list[int]
    g_count: int
    alpha: int | None
    f_count: int
    K_e: list[int]
    taxonomy_241: str | None
    matches_241: list[str]
    taxonomy_811: str
    taxonomy_fix1: str
    o_exponent: int | None = None
    name: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "fixed_points": len(self.fixed_points),
            "fixed_lines": len(self.fixed_lines),
            "g": self.g_count,
            "alpha": self.alpha,
            "f": self.f_count,
            "taxonomy_241": self.taxonomy_241,
            "taxonomy_811": self.taxonomy_811,
            "taxonomy_fix1": self.taxonomy_fix1,
            "o": self.o_exponent,
        }


def fix_profile(geom: PointLineGeometry, theta: GeometryAutomorphism, x: int) -> FixProfile:
    """Fixed elements of theta with the three taxonomies relative to x.

    fix1 cases: "i" fix = x^perp, "ii" fix = {x}, "iii" fix inside one line
    on x; the identity is outside the theorem and gets "not applicable".
    """
    s, t = _order(geom)
    P = theta.fixed_points()
    B = theta.fixed_lines()
    pts = np.arange(geom.n_points)
    g = int((geom.collinear[pts, theta.points] & (theta.points != pts)).sum())
    a241, m241, order = classify_fixed_structure(geom, P, B)
    trivial = theta.is_identity()
    whorl = _fixes_lines_on(theta, geom, x)
    # whorl cases (nontrivial whorls about x, thick GQ)
    if trivial:
        t811 = "not applicable"
    elif not whorl:
        t811 = "not a whorl"
    else:
        off = P[~geom.collinear[x, P]]
        if order is not None and order[1] == t and order[0] >= 2 and x in set(P.tolist()):
            t811 = "3"
        elif len(off):
            t811 = "2"
        else:
            t811 = "1"
    # elation cases relative to x
    pm = perp_mask(geom, [x])
    Pset = set(P.tolist())
    alpha = None
    if trivial:
        tf = "not applicable"
    elif x not in Pset:
        tf = "none"
    elif Pset == set(np.nonzero(pm)[0].tolist()):
        tf = "i"
    elif Pset == {x}:
        tf = "ii"
    else:
        tf = "none"
        for L in _lines_on(geom, x):
            if geom.inc[P, L].all():
                tf = "iii"
                alpha = len(P) - 1
                break
    K_e = [int(L) for L in B if not geom.inc[x, L]]
    return FixProfile(
        [int(p) for p in P],
        [int(L) for L in B],
        g,
        alpha,
        len(K_e),
        K_e,
        a241,
        m241,
        t811,
        tf,
        name=theta.name,
        extra={"substructure_order": order},
    )


# ---------------------------------------------------------------- property (*)


def property_star_check(geom: PointLineGeometry, x: int, action: Sequence[GeometryAutomorphism]) -> Report:
    """Every element fixing y ~ x, y != x, fixes the line xy pointwise."""
    pm = perp_mask(geom, [x])
    pm[x] = False
    ys = np.nonzero(pm)[0]
    checked = 0
    for i, a in enumerate(action):
        if a.is_identity():
            continue
        for y in ys[a.points[ys] == ys]:
            checked += 1
            L = geom.line_through(x, int(y))
            on = _points_on(geom, L)
            moved = on[a.points[on] != on]
            if len(moved):
                return Report(
                    "autm.property_star",
                    geom.name,
                    False,
                    [{"element": i, "fixed_point": int(y), "line": int(L), "moved_point": int(moved[0])}],
                    {"x": x, "incidences_checked": checked},
                )
    return Report("autm.property_star", geom.name, True, [], {"x": x, "incidences_checked": checked})


def left_coset_reps(G: FiniteGroup, A: Subgroup) -> np.ndarray:
    """Minimal representatives of the left cosets kA."""
    free = np.ones(G.order, dtype=bool)
    reps = []
    while free.any():
        k = int(np.argmax(free))
        reps.append(k)
        free[np.asarray(G.mul(k, A.members), dtype=np.int64)] = False
    return np.array(reps, dtype=np.int64)


def core(G: FiniteGroup, A: Subgroup) -> Subgroup:
    """Intersection of the conjugates kAk^-1: the elements fixing every coset kA."""
    reps = left_coset_reps(G, A)
    keep = np.ones(A.order, dtype=bool)
    for k in reps:
        keep &= A.mask[np.asarray(G.conj(A.members, k), dtype=np.int64)]
    return Subgroup(G, A.members[keep])


def property_star_family(K: KantorFamily) -> Report:
    """(*) on the coset geometry, decided inside the group.

    g fixes the point kA* iff k^-1 g k is in A*, so (*) holds iff each A*
    is normal; otherwise an element of A* outside some conjugate fixes
    the point A* but moves a point of [A].
    """
    G = K.group
    for i, As in enumerate(K.Fstar):
        w = normality_witness(G, As)
        if w is not None:
            g, k = int(w[0]), int(w[1])
            return Report(
                "autm.property_star",
                K.name or G.name,
                False,
                [
                    {
                        "member": K.labels[i],
                        "element": g,
                        "element_coords": G.label(g),
                        "fixed_point": f"A{K.labels[i]}*",
                        "moved_point": f"{k}A{K.labels[i]}*",
                    }
                ],
                {"route": "group"},
            )
    return Report("autm.property_star", K.name or G.name, True, [], {"route": "group"})


def ab1_equivalence(H: FiniteGroup, S: Subgroup, star: Report) -> Report:
    """Compares a (*) verdict with commutativity of H/S computed in the quotient."""
    Q, proj = quotient(H, S)
    gens = np.array(H.generators(), dtype=np.int64)
    qg = proj[gens]
    ab = Q.mul(qg[:, None], qg[None, :]) == Q.mul(qg[None, :], qg[:, None])
    abelian = bool(ab.all())
    wit = []
    if not abelian:
        i, j = (int(v) for v in np.argwhere(~ab)[0])
        wit.append({"non_commuting": [int(gens[i]), int(gens[j])], "quotient_images": [int(qg[i]), int(qg[j])]})
    agree = abelian == (star.verdict is True)
    return Report(
        "autm.ab1",
        H.name,
        agree,
        wit,
        {"star": star.verdict, "quotient_abelian": abelian, "quotient_order": Q.order},
    )


def centrality_check(H: FiniteGroup, S: Subgroup) -> Report:
    """S inside Z(H), with a non-trivial commutator as witness otherwise."""
    sg = np.array(S.gens() or [0], dtype=np.int64)
    hg = np.array(H.generators() or [0], dtype=np.int64)
    c = np.asarray(H.commutator(sg[:, None], hg[None, :]), dtype=np.int64)
    if (c == 0).all():
        return Report("autm.centrality", H.name, True, [], {"S_order": S.order})
    i, j = (int(v) for v in np.argwhere(c != 0)[0])
    return Report(
        "autm.centrality",
        H.name,
        False,
        [{"s": int(sg[i]), "h": int(hg[j]), "commutator": int(c[i, j])}],
        {"S_order": S.order},
    )


# ---------------------------------------------------------------- Moufang conditions


@dataclass
class RootSpec:
    """A (dual) root e0..e4 or an i-root (its interior triple).

    ``first_is_point`` tells whether elements[0] is a point.
    """

    elements: tuple
    first_is_point: bool = True

    def validate(self, geom: PointLineGeometry) -> None:
        e = self.elements
        if len(e) not in (3, 5):
            raise ValueError("a root has 5 elements, an i-root 3")
        pts = e[0::2] if self.first_is_point else e[1::2]
        lns = e[1::2] if self.first_is_point else e[0::2]
        if len(set(pts)) != len(pts) or len(set(lns)) != len(lns):
            raise ValueError("root elements must be distinct")
        for i in range(len(e) - 1):
            a, b = e[i], e[i + 1]
            p, L = (a, b) if (i % 2 == 0) == self.first_is_point else (b, a)
            if not geom.inc[p, L]:
                raise ValueError(f"consecutive elements {a}, {b} are not incident")

    def interior(self):
        return self.elements[1:4] if len(self.elements) == 5 else self.elements


def moufang_iroot_check(
    geom: PointLineGeometry, iroot: RootSpec, action: Sequence[GeometryAutomorphism]
) -> Report:
    """Root group of the i-root (x, L, y) inside ``action``.

    The root group fixes x and y linewise and L pointwise; the i-root is
    Moufang when it is transitive on M minus y for a line M != L on y.
    """
    s, t = _order(geom)
    if not iroot.first_is_point or len(iroot.interior()) != 3:
        raise ValueError("expected an i-root (point, line, point)")
    iroot.validate(geom)
    x, L, y = (int(v) for v in iroot.interior())
    R = [
        i
        for i, a in enumerate(action)
        if _fixes_lines_on(a, geom, x) and _fixes_lines_on(a, geom, y) and _fixes_points_on(a, geom, L)
    ]
    M = int(next(m for m in _lines_on(geom, y) if m != L))
    rest = [int(p) for p in _points_on(geom, M) if p != y]
    orbit = sorted({int(action[i].points[rest[0]]) for i in R})
    moufang = orbit == rest
    return Report(
        "autm.moufang_iroot",
        geom.name,
        moufang,
        [] if moufang else [{"iroot": [x, L, y], "line": M, "orbit": orbit}],
        {"iroot": [x, L, y], "root_group": R, "root_group_order": len(R), "orbit_size": len(orbit), "s": s, "sharp": moufang and len(R) == s},
    )


def m_x_check(geom: PointLineGeometry, x: int, action: Sequence[GeometryAutomorphism]) -> Report:
    """(M)_x: every i-root (x, L, y) is Moufang within the action."""
    results = []
    bad = []
    for L in _lines_on(geom, x):
        for y in _points_on(geom, L):
            if y == x:
                continue
            r = moufang_iroot_check(geom, RootSpec((x, int(L), int(y))), action)
            results.append(r)
            if not r:
                bad.append({"iroot": r.parameters["iroot"], "root_group_order": r.parameters["root_group_order"]})
    return Report("autm.M_x", geom.name, not bad, bad, {"x": x, "iroots": len(results)})


def _mstgq2(geom, x, action):
    C = geom.collinear
    pm = C[x].copy()
    pm[x] = False
    aff_lines = np.nonzero(~geom.inc[x])[0]
    for y in np.nonzero(pm)[0]:
        xy = geom.line_through(x, int(y))
        for i, a in enumerate(action):
            if a.is_identity() or not (_fixes_lines_on(a, geom, x) and _fixes_lines_on(a, geom, int(y)) and _fixes_points_on(a, geom, xy)):
                continue
            for U in aff_lines[a.lines[aff_lines] == aff_lines]:
                z = int(np.nonzero(geom.inc[:, U] & geom.inc[:, xy])[0][0])
                if not _fixes_lines_on(a, geom, z):
                    return False, {"y": int(y), "element": i, "line": int(U), "point": z}
    return True, None


def _mstgq3(geom, x):
    D = geom.concurrent
    on_x = geom.inc[x]
    for V in np.nonzero(on_x)[0]:
        cand = np.nonzero(~D[V])[0]
        for a, W in enumerate(cand):
            for X in cand[a + 1 :]:
                if D[W, X]:
                    continue
                cen = np.nonzero(D[V] & D[W] & D[X])[0]
                if len(cen) == 1 and on_x[cen[0]]:
                    return False, {"triad": [int(V), int(W), int(X)], "center": int(cen[0])}
    return True, None


def _mstgq1b(geom, x, action):
    aff_lines = np.nonzero(~geom.inc[x])[0]
    for i, a in enumerate(action):
        if a.is_identity():
            continue
        for U in aff_lines[a.lines[aff_lines] == aff_lines]:
            on = _points_on(geom, U)
            z = int(on[geom.collinear[x, on]][0])
            if not _fixes_lines_on(a, geom, z):
                return False, {"element": i, "line": int(U), "point": z}
    return True, None


def mstgq_check(geom: PointLineGeometry, x: int, action: Sequence[GeometryAutomorphism]) -> Report:
    """(MSTGQ1), (MSTGQ2), (MSTGQ3) and (MSTGQ1)^b, each reported separately."""
    m1 = m_x_check(geom, x, action)
    m2, w2 = _mstgq2(geom, x, action)
    m3, w3 = _mstgq3(geom, x)
    m1b, w1b = _mstgq1b(geom, x, action)
    axioms = {"MSTGQ1": bool(m1), "MSTGQ2": m2, "MSTGQ3": m3, "MSTGQ1b": m1b}
    wit = []
    if not m1:
        wit.append({"axiom": "MSTGQ1", "iroot": m1.witnesses[0]["iroot"]})
    for name, w in (("MSTGQ2", w2), ("MSTGQ3", w3), ("MSTGQ1b", w1b)):
        if w is not None:
            wit.append({"axiom": name, **w})
    return Report("autm.mstgq", geom.name, m1.verdict and m2 and m3, wit, {"x": x, "axioms": axioms})


def iroot_group_family(K: KantorFamily, label, k: int = 0) -> Report:
    """Root group of the i-root ((inf), [A], kA*) inside the elation group.

    It is core(A*) intersected with the elements g having r^-1 g r in A
    for every r in kA*; the i-root is Moufang iff it has s elements.
    """
    G = K.group
    A, As = K.member(label)
    C = core(G, As)
    kAs = np.asarray(G.mul(k, As.members), dtype=np.int64)
    keep = np.ones(C.order, dtype=bool)
    for r in kAs:
        keep &= A.mask[np.asarray(G.conj(C.members, r), dtype=np.int64)]
        if not keep.any():
            break
    R = C.members[keep]
    ok = len(R) == K.s
    return Report(
        "autm.moufang_iroot",
        K.name or G.name,
        ok,
        [] if ok else [{"iroot": ["(inf)", f"[A{label}]", f"{k}A{label}*"], "root_group_order": int(len(R))}],
        {"member": str(label), "k": int(k), "root_group_order": int(len(R)), "core_order": C.order, "s": K.s, "route": "group"},
    )


def mstgq1_family_sampled(K: KantorFamily, labels=None, samples: int = 2, seed: int = 0) -> Report:
    """(MSTGQ1) on sampled i-roots ((inf), [A], kA*), decided in the group."""
    rng = np.random.default_rng(seed)
    labels = K.labels if labels is None else [str(l) for l in labels]
    per = {}
    wit = []
    for lab in labels:
        As = K.member(lab)[1]
        reps = left_coset_reps(K.group, As)
        ks = [0] + [int(v) for v in rng.choice(reps[1:], size=min(samples - 1, len(reps) - 1), replace=False)] if samples > 1 else [0]
        rs = [iroot_group_family(K, lab, k) for k in ks]
        per[lab] = [r.parameters["root_group_order"] for r in rs]
        for r in rs:
            if not r:
                wit.extend(r.witnesses)
    return Report(
        "autm.mstgq1_sampled",
        K.name or K.group.name,
        not wit,
        wit,
        {"root_group_orders": per, "s": K.s, "samples_per_member": samples, "seed": seed},
    )


# ---------------------------------------------------------------- averaging, transfer


def averaging_check(geom: PointLineGeometry, x: int, action: Sequence[GeometryAutomorphism]) -> Report:
    """Every nontrivial element fixing an affine line fixes exactly s affine
    lines and t+s+1 lines in all.  Needs (*), and s != t when s is even."""
    s, t = _order(geom)
    star = property_star_check(geom, x, action)
    if not star or (s == t and s % 2 == 0):
        return Report(
            "autm.averaging",
            geom.name,
            "not applicable",
            [],
            {"star": star.verdict, "s": s, "t": t},
        )
    aff = ~geom.inc[x]
    counts = {}
    bad = []
    n = 0
    for i, a in enumerate(action):
        if a.is_identity():
            continue
        fl = a.lines == np.arange(geom.n_lines)
        f = int((fl & aff).sum())
        if f == 0:
            continue
        n += 1
        total = int(fl.sum())
        counts[(f, total)] = counts.get((f, total), 0) + 1
        if f != s or total != t + s + 1:
            bad.append({"element": i, "affine_fixed": f, "total_fixed": total})
    return Report(
        "autm.averaging",
        geom.name,
        not bad,
        bad[:5],
        {"stabilizers": n, "distribution": {f"{k[0]}/{k[1]}": v for k, v in sorted(counts.items())}, "s": s, "t": t},
    )


def _p_log(n: int, p: int) -> int | None:
    if n < 1:
        return None
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


def transfer_check(profile: FixProfile, s: int, t: int, p: int) -> Report:
    """alpha - f = 0 mod (s/t + 1); with alpha and f both p-powers, alpha/f
    is an even power of s/t, stored as ``o``."""
    subj = profile.name or "element"
    if s <= t or s % t:
        return Report("autm.transfer", subj, "not applicable", [], {"reason": "needs s > t"})
    if profile.taxonomy_fix1 != "iii" or profile.alpha is None:
        return Report("autm.transfer", subj, "not applicable", [], {"reason": "not a one-line element", "fix1": profile.taxonomy_fix1})
    a, f = profile.alpha, profile.f_count
    if _p_log(a, p) is None:
        return Report("autm.transfer", subj, "not applicable", [], {"reason": "alpha not a p-power", "alpha": a})
    m = s // t + 1
    cong = (a - f) % m == 0
    params = {"alpha": a, "f": f, "modulus": m, "congruence": cong, "f_nonzero": f != 0}
    if _p_log(f, p) is None:
        params["mode"] = "congruence-only"
        return Report("autm.transfer", subj, cong and f != 0, [], params)
    r = s // t
    hi, lo = max(a, f), min(a, f)
    e = round(math.log(hi // lo, r)) if hi % lo == 0 else None
    o = None
    if e is not None and r**e == hi // lo:
        o = e if a >= f else -e
    profile.o_exponent = o
    params.update({"mode": "exponent", "o": o})
    ok = cong and f != 0 and o is not None and o % 2 == 0
    return Report("autm.transfer", subj, ok, [] if ok else [params], params)


# ---------------------------------------------------------------- structure


def semifield_type_check(H: FiniteGroup, M: Subgroup, N: Subgroup) -> Report:
    """Orders q^2, elementary abelian and normal, H = MN, and [m,n] = 1
    only when m or n lies in M cap N."""
    q = round(H.order ** (1 / 3))
    while q**3 < H.order:
        q += 1
    if q**3 != H.order:
        raise ValueError("|H| must be a cube")
    items = {}
    items["distinct"] = M != N
    items["orders"] = M.order == q * q and N.order == q * q
    items["elementary_abelian"] = M.is_elementary_abelian() and N.is_elementary_abelian()
    items["normal"] = normality_witness(H, M) is None and normality_witness(H, N) is None
    items["product"] = bool(product_set(H, M, N).all())
    both = M.mask & N.mask
    cm = np.asarray(H.commutator(M.members[:, None], N.members[None, :]), dtype=np.int64)
    triv = cm == 0
    allowed = both[M.members][:, None] | both[N.members][None, :]
    bad = np.argwhere(triv & ~allowed)
    items["commutator"] = len(bad) == 0
    wit = []
    if len(bad):
        i, j = bad[0]
        wit.append({"m": int(M.members[i]), "n": int(N.members[j])})
    for k, v in items.items():
        if not v and k != "commutator":
            wit.append({"failed": k})
    return Report("autm.semifield_type", H.name, all(items.values()), wit, {"q": q, "items": items})


def structure_equiv_report(
    K: KantorFamily, geom: PointLineGeometry | None = None, action=None, x: int = 0
) -> Report:
    """Items (i)-(v): abelian A*, (M)_x, H special of exponent p, S <= Z(H),
    S = Z(H).  The verdict is True when all five agree."""
    from .kantor import coset_geometry, verify_stgq_family

    H = K.group
    if K.s != K.t or K.s % 2 == 0:
        raise ValueError("the five items are compared for STGQs of order (s, s), s odd")
    if K.S is None and not verify_stgq_family(K):
        raise ValueError("family is not an STGQ family")
    S = K.S
    if geom is None or action is None:
        geom, action = coset_geometry(K)
        from .gq import verify_gq

        verify_gq(geom)
    Z = center(H)
    D = derived_subgroup(H)
    Phi = frattini(H)
    p = H.prime()
    items = {
        "i_abelian_Fstar": all(As.is_abelian() for As in K.Fstar),
        "ii_M_x": bool(m_x_check(geom, x, action)),
        "iii_special_exponent_p": Z == D == Phi and int(np.lcm.reduce(H.element_orders())) == p,
        "iv_S_in_center": S.issubset(Z),
        "v_S_is_center": S == Z,
    }
    vals = set(items.values())
    return Report("autm.structure_equiv", K.name or H.name, len(vals) == 1, [] if len(vals) == 1 else [items], {"items": items})


def projection_lemma_check(H: FiniteGroup, S: Subgroup, F=None) -> Report:
    """No maximal subgroup M has MS = H; cross-checked against S <= Phi(H)."""
    maxs = maximal_subgroups(H)
    proj = [i for i, M in enumerate(maxs) if product_set(H, M, S).all()]
    Phi = frattini(H)
    in_phi = S.issubset(Phi)
    ok = not proj
    wit = []
    if proj:
        wit.append({"maximal_subgroup": proj[0], "order": maxs[proj[0]].order})
    params = {"maximal_subgroups": len(maxs), "S_in_Phi": in_phi, "Phi_equals_S": Phi == S, "routes_agree": ok == in_phi}
    if F is not None and not ok and len(F) >= 2:
        AB = product_set(H, F[0], F[1])
        params["AB_projects"] = bool(product_set(H, Subgroup.from_mask(H, AB), S).all()) if _is_subgroup(H, AB) else None
    return Report("autm.projection_lemma", H.name, ok, wit, params)


def _is_subgroup(H, mask):
    from .grp import is_subgroup_set

    return is_subgroup_set(H, np.nonzero(mask)[0])
