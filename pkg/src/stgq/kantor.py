"""Kantor families, the STGQ condition and the coset geometry.

A Kantor family of type (s,t) in a group K of order s^2 t is a list of
t+1 subgroups A of order s with partners A* of order st such that
A <= A*, AB cap C = 1 for distinct A, B, C, and A cap B* = 1 for A != B.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .grp import (
    FiniteGroup,
    Subgroup,
    automorphisms,
    heisenberg,
    is_normal,
    normality_witness,
    product_set,
    subgroup_generate,
    subgroups,
    suzuki_tits_group,
)
from .gq import GeometryAutomorphism, PointLineGeometry
from .report import Report

__all__ = [
    "KantorFamily",
    "CosetGeometry",
    "verify_kantor_family",
    "verify_stgq_family",
    "coset_geometry",
    "classical_w_family",
    "suzuki_tits_family",
    "search_kantor_families",
]


@dataclass
class KantorFamily:
    group: FiniteGroup
    F: list[Subgroup]
    Fstar: list[Subgroup]
    s: int
    t: int
    S: Subgroup | None = None
    labels: list[str] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        if not self.labels:
            self.labels = [str(i) for i in range(len(self.F))]

    def index(self, label) -> int:
        return self.labels.index(str(label))

    def member(self, label) -> tuple[Subgroup, Subgroup]:
        i = self.index(label)
        return self.F[i], self.Fstar[i]


def verify_kantor_family(G: FiniteGroup, F, Fstar, s: int, t: int, subject: str = "") -> Report:
    """Axioms (a)-(d) with the first violation of each as witness."""
    w: list = []
    res: dict = {}
    ok_a = G.order == s * s * t and len(F) == len(Fstar) == t + 1
    if not ok_a:
        w.append({"axiom": "a", "group_order": G.order, "members": [len(F), len(Fstar)], "expected": [s * s * t, t + 1]})
    for i, (A, As) in enumerate(zip(F, Fstar)):
        if ok_a and (A.order != s or As.order != s * t):
            ok_a = False
            w.append({"axiom": "a", "member": i, "orders": [A.order, As.order]})
    res["a"] = ok_a
    ok_b = True
    for i, (A, As) in enumerate(zip(F, Fstar)):
        if not A.issubset(As):
            ok_b = False
            w.append({"axiom": "b", "member": i})
            break
    res["b"] = ok_b
    n = len(F)
    ok_d = True
    for i in range(n):
        for j in range(n):
            if i != j and (F[i].mask & Fstar[j].mask).sum() != 1:
                ok_d = False
                common = [int(g) for g in np.nonzero(F[i].mask & Fstar[j].mask)[0] if g]
                w.append({"axiom": "d", "A": i, "Bstar": j, "element": common[0] if common else None})
                break
        if not ok_d:
            break
    res["d"] = ok_d
    ok_c = True
    for i, j in itertools.combinations(range(n), 2):
        AB = product_set(G, F[i], F[j])
        for k in range(n):
            if k in (i, j):
                continue
            if (AB & F[k].mask).sum() != 1 or F[i] == F[j]:
                ok_c = False
                common = [int(g) for g in np.nonzero(AB & F[k].mask)[0] if g]
                w.append({"axiom": "c", "A": i, "B": j, "C": k, "element": common[0] if common else None})
                break
        if not ok_c:
            break
    if n >= 2 and ok_c:
        # repeated members also break (c) for the remaining configurations
        for i, j in itertools.combinations(range(n), 2):
            if F[i] == F[j]:
                ok_c = False
                w.append({"axiom": "c", "A": i, "B": j, "repeated": True})
                break
    res["c"] = ok_c
    return Report(
        "kantor.axioms",
        subject or G.name,
        all(res.values()),
        w,
        {"s": s, "t": t, "axioms": res},
    )


def verify_stgq_family(K: KantorFamily) -> Report:
    """A* cap B* constant and normal; then S = that subgroup and A* = A S."""
    G = K.group
    n = len(K.F)
    inter = None
    for i, j in itertools.combinations(range(n), 2):
        m = K.Fstar[i].mask & K.Fstar[j].mask
        if inter is None:
            inter, first = m, (i, j)
        elif not (m == inter).all():
            return Report(
                "kantor.stgq",
                K.name or G.name,
                False,
                [{"reason": "intersection not constant", "pairs": [list(first), [i, j]], "orders": [int(inter.sum()), int(m.sum())]}],
                {"s": K.s, "t": K.t},
            )
    S = Subgroup.from_mask(G, inter)
    nw = normality_witness(G, S)
    if nw is not None:
        return Report(
            "kantor.stgq",
            K.name or G.name,
            False,
            [{"reason": "intersection not normal", "element": nw[0], "conjugator": nw[1]}],
            {"s": K.s, "t": K.t, "S_order": S.order},
        )
    for i, (A, As) in enumerate(zip(K.F, K.Fstar)):
        if not (product_set(G, A, S) == As.mask).all():
            return Report(
                "kantor.stgq",
                K.name or G.name,
                False,
                [{"reason": "A* != A S", "member": i}],
                {"s": K.s, "t": K.t, "S_order": S.order},
            )
    K.S = S
    return Report("kantor.stgq", K.name or G.name, True, [], {"s": K.s, "t": K.t, "S_order": S.order, "S": S.members})


# ---------------------------------------------------------------- coset geometry


class CosetGeometry:
    """The geometry of a Kantor family with the left action of its group.

    Points: 0 is (inf); then the cosets k A_i* (member by member, each block
    ordered by minimal element); then the group elements.
    Lines: [A_i] for each member; then the cosets r A_i in the same order.
    """

    def __init__(self, K: KantorFamily):
        G = K.group
        self.family = K
        self.group = G
        n = len(K.F)
        elems = G.elements
        self.star_reps: list[np.ndarray] = []
        self.star_of: list[np.ndarray] = []  # element -> coset position
        self.line_reps: list[np.ndarray] = []
        self.line_of: list[np.ndarray] = []
        for A, As in zip(K.F, K.Fstar):
            for sub, reps_l, of_l in ((As, self.star_reps, self.star_of), (A, self.line_reps, self.line_of)):
                cos = np.asarray(G.mul(elems[:, None], sub.members[None, :]), dtype=np.int64)
                rep = cos.min(axis=1)
                reps = np.unique(rep)
                reps_l.append(reps)
                of_l.append(np.searchsorted(reps, rep))
        self.star_base = np.cumsum([1] + [len(r) for r in self.star_reps])[:-1]
        self.affine_base = 1 + sum(len(r) for r in self.star_reps)
        self.line_base = np.cumsum([n] + [len(r) for r in self.line_reps])[:-1]
        self.n_points = self.affine_base + G.order
        self.n_lines = n + sum(len(r) for r in self.line_reps)

    def point_of_star(self, i: int, k: int) -> int:
        """Point k A_i*."""
        return int(self.star_base[i] + self.star_of[i][k])

    def point_of_element(self, g: int) -> int:
        return int(self.affine_base + g)

    def line_of_coset(self, i: int, r: int) -> int:
        """Line r A_i."""
        return int(self.line_base[i] + self.line_of[i][r])

    def build(self) -> PointLineGeometry:
        K, G = self.family, self.group
        lines = []
        labels = []
        for i in range(len(K.F)):
            lines.append([0] + [int(self.star_base[i] + j) for j in range(len(self.star_reps[i]))])
            labels.append(f"[A{K.labels[i]}]")
        for i, A in enumerate(K.F):
            for r in self.line_reps[i]:
                pts = [self.point_of_star(i, r)] + [self.affine_base + int(g) for g in np.asarray(G.mul(r, A.members))]
                lines.append(pts)
                labels.append(f"{int(r)}A{K.labels[i]}")
        plabels = ["(inf)"]
        for i in range(len(K.F)):
            plabels += [f"{int(k)}A{K.labels[i]}*" for k in self.star_reps[i]]
        plabels += [f"g{g}" for g in range(G.order)]
        geom = PointLineGeometry(self.n_points, lines, name=f"coset geometry of {K.name or G.name}", point_labels=plabels, line_labels=labels)
        return geom

    def element_action(self, g: int) -> GeometryAutomorphism:
        """Left multiplication by g as point and line permutations."""
        G, K = self.group, self.family
        pts = np.zeros(self.n_points, dtype=np.int64)
        lns = np.arange(self.n_lines, dtype=np.int64)
        for i in range(len(K.F)):
            reps = self.star_reps[i]
            pts[self.star_base[i] : self.star_base[i] + len(reps)] = self.star_base[i] + self.star_of[i][np.asarray(G.mul(g, reps))]
            lr = self.line_reps[i]
            lns[self.line_base[i] : self.line_base[i] + len(lr)] = self.line_base[i] + self.line_of[i][np.asarray(G.mul(g, lr))]
        pts[self.affine_base :] = self.affine_base + np.asarray(G.mul(g, G.elements))
        return GeometryAutomorphism(pts, lns, name=f"g{int(g)}")

    def action(self, elements=None) -> list[GeometryAutomorphism]:
        els = self.group.elements if elements is None else elements
        return [self.element_action(int(g)) for g in els]


def coset_geometry(K: KantorFamily):
    """(geometry, action) where action[g] is left multiplication by g."""
    if K.group.order > 4096:
        raise ValueError("explicit coset geometry is built only for |K| <= 4096")
    cg = CosetGeometry(K)
    geom = cg.build()
    geom.coset = cg
    return geom, cg.action()


# ---------------------------------------------------------------- explicit families


def classical_w_family(q: int) -> KantorFamily:
    """W(q) family in H_1(q), q odd.

    A(inf) = {(0,0,b)}, A(m) = {(a, m a^2/2, m a)}, A* = A Z.
    """
    if q % 2 == 0:
        raise ValueError("classical_w_family needs odd q")
    if q > 9:
        raise ValueError("q must be at most 9")
    G = heisenberg(1, q)
    F_ = G.field
    _, _, enc = G.heis
    half = F_.half()
    Z = Subgroup(G, [enc([0], c, [0]) for c in range(q)])
    fam, stars, labels = [], [], []
    A = Subgroup(G, [enc([0], 0, [b]) for b in range(q)])
    fam.append(A)
    labels.append("inf")
    for m in range(q):
        mem = []
        for a in range(q):
            c = F_.mul[F_.mul[m, F_.mul[a, a]], half]
            mem.append(enc([a], int(c), [int(F_.mul[m, a])]))
        fam.append(Subgroup(G, mem))
        labels.append(str(m))
    for A in fam:
        stars.append(Subgroup.from_mask(G, product_set(G, A, Z)))
    return KantorFamily(G, fam, stars, q, q, labels=labels, name=f"W({q}) family in H_1({q})")


def suzuki_tits_family(q: int) -> KantorFamily:
    """Family of type (q^2, q) in the Suzuki-Tits group; member m in F_q or inf.

    A(m) = {[a,b,m f(a,b),ma,mb]}, A*(m) = {[a,b,c,ma,mb]},
    A(inf) = {[0,0,0,d,e]}, A*(inf) = {[0,0,c,d,e]}.
    """
    G = suzuki_tits_group(q)
    F_, sig = G.field, G.sigma
    add, mul = F_.add, F_.mul
    r = np.arange(q)
    a, b = np.meshgrid(r, r, indexing="ij")
    a, b = a.ravel(), b.ravel()
    fab = add[add[mul[mul[sig[a], a], a], mul[a, b]], sig[b]]
    w = q ** np.arange(5)

    def enc(*cols):
        return np.stack(np.broadcast_arrays(*cols), axis=-1) @ w

    fam, stars, labels = [], [], []
    z = np.zeros_like(a)
    fam.append(Subgroup(G, enc(z, z, z, a, b)))
    c3 = np.arange(q)
    A3, B3, C3 = (x.ravel() for x in np.meshgrid(r, r, c3, indexing="ij"))
    z3 = np.zeros_like(A3)
    stars.append(Subgroup(G, enc(z3, z3, C3, A3, B3)))
    labels.append("inf")
    for m in range(q):
        fam.append(Subgroup(G, enc(a, b, mul[m, fab], mul[m, a], mul[m, b])))
        stars.append(Subgroup(G, enc(A3, B3, C3, mul[m, A3], mul[m, B3])))
        labels.append(str(m))
    return KantorFamily(G, fam, stars, q * q, q, labels=labels, name=f"Suzuki-Tits family, q = {q}")


# ---------------------------------------------------------------- search


def _family_key(pairs) -> tuple:
    return tuple(sorted(pairs))


def search_kantor_families(G: FiniteGroup, s: int, t: int, fixed_S: Subgroup | None = None) -> list[KantorFamily]:
    """All Kantor families of type (s,t) in G, up to Aut(G) when |G| <= 64."""
    if G.order != s * s * t:
        raise ValueError(f"|G| = {G.order} but s^2 t = {s * s * t}")
    if G.order > 256:
        raise ValueError("search is capped at |G| <= 256")
    subs = subgroups(G, max_order=s * t)
    small = [S for S in subs if S.order == s]
    big = [S for S in subs if S.order == s * t]
    pairs = []
    for A in small:
        if fixed_S is not None:
            m = product_set(G, A, fixed_S)
            if m.sum() != s * t:
                continue
            As = Subgroup.from_mask(G, m)
            if any(As == B for B in big):
                pairs.append((A, As))
            continue
        for As in big:
            if A.issubset(As):
                pairs.append((A, As))
    P = len(pairs)
    if P == 0:
        return []
    MA = np.array([A.mask for A, _ in pairs], dtype=np.int32)
    MS = np.array([As.mask for _, As in pairs], dtype=np.int32)
    inter = MA @ MS.T
    compat = (inter == 1) & (inter.T == 1)
    prod_cache: dict = {}

    def prod(i, j):
        key = (i, j) if i < j else (j, i)
        if key not in prod_cache:
            prod_cache[key] = product_set(G, pairs[key[0]][0], pairs[key[1]][0])
        return prod_cache[key]

    found: list[list[int]] = []
    chosen: list[int] = []

    def ok_with(k):
        Ak = pairs[k][0].mask
        for i, j in itertools.combinations(chosen, 2):
            if (prod(i, j) & Ak).sum() != 1:
                return False
        for i in chosen:
            pik = prod(i, k)
            for j in chosen:
                if j != i and (pik & pairs[j][0].mask).sum() != 1:
                    return False
        return True

    def rec(start, cand):
        if len(chosen) == t + 1:
            found.append(list(chosen))
            return
        for k in cand[cand >= start]:
            k = int(k)
            if not ok_with(k):
                continue
            chosen.append(k)
            rec(k + 1, cand[compat[k, cand]])
            chosen.pop()

    rec(0, np.arange(P))

    def to_family(idx):
        fam = [pairs[i][0] for i in idx]
        st = [pairs[i][1] for i in idx]
        return KantorFamily(G, fam, st, s, t, name=f"family in {G.name}")

    if G.order > 64 or not found:
        return [to_family(f) for f in found]
    # orbit reduction under Aut(G)
    auts = automorphisms(G)
    keyed = [_family_key((pairs[i][0].key, pairs[i][1].key) for i in f) for f in found]
    seen: set = set()
    reps = []
    for f, key in zip(found, keyed):
        if key in seen:
            continue
        reps.append(f)
        for phi in auts:
            img = _family_key(
                (np.sort(phi[pairs[i][0].members]).tobytes(), np.sort(phi[pairs[i][1].members]).tobytes()) for i in f
            )
            seen.add(img)
    return [to_family(f) for f in reps]
