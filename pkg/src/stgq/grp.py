"""Finite groups on dense indices, subgroup queries and structure.

A group is a set ``0..order-1`` with 0 the identity.  Multiplication is a
Cayley table when the order is at most 4096, and otherwise an evaluated
coordinate law.  Every query accepts and returns numpy index arrays, so the
same code serves a 27-element Heisenberg group and the Suzuki-Tits group
of order 32768.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .ff import FiniteField, field_of_order, is_prime, tits_endomorphism

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "GroupProfile",
    "ChiForm",
    "IsoResult",
    "group_from_law",
    "group_from_permutations",
    "cyclic_group",
    "elementary_abelian",
    "heisenberg",
    "suzuki_tits_group",
    "suzuki_tits_matrix",
    "suzuki_tits_matrix_check",
    "subgroup_generate",
    "structure_profile",
    "quotient",
    "chi_form",
    "ban_check",
    "subgroups",
    "abelian_subgroups_of_order",
    "maximal_subgroups",
    "group_isomorphic",
    "automorphisms",
]

TABLE_LIMIT = 4096
PROFILE_LIMIT = 2**15


class FiniteGroup:
    """Group on indices 0..order-1 with identity 0.

    Either ``table`` (Cayley table) or ``law`` (vectorized callable on index
    arrays) must be given.  ``coords``/``encode`` translate between indices
    and coordinate tuples where a coordinate model exists.
    """

    def __init__(
        self,
        order: int,
        table: np.ndarray | None = None,
        law: Callable | None = None,
        name: str = "",
        spec: tuple | None = None,
        coords: Callable | None = None,
        encode: Callable | None = None,
        tabulate: bool = True,
    ):
        self.order = int(order)
        self.name = name or f"group of order {order}"
        self.spec = spec
        self.coords = coords
        self.encode = encode
        self._law = law
        if table is None and law is not None and tabulate and order <= TABLE_LIMIT:
            ar = np.arange(order, dtype=np.int64)
            table = np.asarray(law(ar[:, None], ar[None, :]), dtype=np.int64)
        if table is not None:
            dt = np.int32 if order > 256 else np.int64
            table = np.ascontiguousarray(table, dtype=dt)
        self.table = table
        if table is None and law is None:
            raise ValueError("need a table or a law")
        self._inv = self._compute_inverses()
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"<{self.name}>"

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def mul(self, a, b):
        if self.table is not None:
            return self.table[a, b]
        return self._law(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))

    def inv(self, a):
        return self._inv[a]

    def _compute_inverses(self) -> np.ndarray:
        g = np.arange(self.order, dtype=np.int64)
        inv = np.full(self.order, -1, dtype=np.int64)
        inv[0] = 0
        cur = g.copy()
        for _ in range(self.order):
            nxt = np.asarray(self.mul(cur, g), dtype=np.int64)
            hit = (nxt == 0) & (inv < 0)
            inv[hit] = cur[hit]
            if (inv >= 0).all():
                return inv
            cur = nxt
        raise ValueError("missing inverses")

    def power(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros_like(a)
        base = a
        while k:
            if k & 1:
                out = np.asarray(self.mul(out, base), dtype=np.int64)
            base = np.asarray(self.mul(base, base), dtype=np.int64)
            k >>= 1
        return out

    def conj(self, a, g):
        """g^-1 a g."""
        return self.mul(self.mul(self.inv(g), a), g)

    def commutator(self, a, b):
        """[a,b] = a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def element_orders(self) -> np.ndarray:
        if "orders" not in self._cache:
            g = self.elements
            orders = np.zeros(self.order, dtype=np.int64)
            orders[0] = 1
            cur = g.copy()
            k = 1
            while (orders == 0).any():
                k += 1
                cur = np.asarray(self.mul(cur, g), dtype=np.int64)
                orders[(cur == 0) & (orders == 0)] = k
            self._cache["orders"] = orders
        return self._cache["orders"]

    def generators(self) -> list[int]:
        if "gens" not in self._cache:
            self._cache["gens"] = _greedy_generators(self, self.elements)
        return self._cache["gens"]

    def is_abelian(self) -> bool:
        gens = np.array(self.generators(), dtype=np.int64)
        if len(gens) == 0:
            return True
        return bool((self.mul(gens[:, None], gens[None, :]) == self.mul(gens[None, :], gens[:, None])).all())

    def prime(self) -> int | None:
        """p when the order is a power of the prime p."""
        n = self.order
        if n == 1:
            return None
        p = next(d for d in range(2, n + 1) if n % d == 0)
        while n % p == 0:
            n //= p
        return p if n == 1 else None

    def label(self, g: int) -> str:
        if self.coords is None:
            return str(int(g))
        return str(tuple(int(x) for x in self.coords(int(g))))

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.elements)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, np.zeros(1, dtype=np.int64))


class Subgroup:
    """Sorted member set of a parent group."""

    def __init__(self, parent: FiniteGroup, members):
        self.parent = parent
        m = np.unique(np.asarray(members, dtype=np.int64))
        self.members = m
        self._mask = None
        self._gens = None

    @classmethod
    def from_mask(cls, parent: FiniteGroup, mask: np.ndarray) -> "Subgroup":
        s = cls(parent, np.nonzero(mask)[0])
        s._mask = mask
        return s

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(int(g) for g in self.members)

    def __contains__(self, g) -> bool:
        return bool(self.mask[int(g)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and len(other.members) == len(self.members)
            and bool((other.members == self.members).all())
        )

    def __hash__(self) -> int:
        return hash(self.members.tobytes())

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order})"

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.parent.order, dtype=bool)
            m[self.members] = True
            self._mask = m
        return self._mask

    @property
    def key(self) -> bytes:
        return self.members.tobytes()

    def gens(self) -> list[int]:
        if self._gens is None:
            self._gens = _greedy_generators(self.parent, self.members)
        return self._gens

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.members].all())

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.from_mask(self.parent, self.mask & other.mask)

    def is_abelian(self) -> bool:
        g = np.array(self.gens(), dtype=np.int64)
        G = self.parent
        return len(g) == 0 or bool((G.mul(g[:, None], g[None, :]) == G.mul(g[None, :], g[:, None])).all())

    def exponent(self) -> int:
        return int(np.lcm.reduce(self.parent.element_orders()[self.members]))

    def is_elementary_abelian(self) -> bool:
        p = self.parent.prime()
        return self.is_abelian() and (self.order == 1 or (p is not None and self.exponent() == p))

    def is_normal(self) -> bool:
        return is_normal(self.parent, self)


# ---------------------------------------------------------------- closure


def _closure_mask(G: FiniteGroup, gens, limit: int | None = None):
    """Mask of <gens>; None when the closure grows beyond ``limit`` elements."""
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.zeros(1, dtype=np.int64)
    size = 1
    while frontier.size and len(gens):
        prods = np.asarray(G.mul(frontier[:, None], gens[None, :]), dtype=np.int64).ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        size += len(new)
        if limit is not None and size > limit:
            return None
        frontier = new
    return mask


def _greedy_generators(G: FiniteGroup, members) -> list[int]:
    members = np.asarray(members, dtype=np.int64)
    target = len(members)
    gens: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    if target == 1:
        return gens
    # prefer elements of large order so fewer generators are needed
    orders = G.element_orders()[members]
    ordered = members[np.argsort(-orders, kind="stable")]
    size = 1
    for g in ordered:
        if mask[g]:
            continue
        gens.append(int(g))
        mask = _closure_mask(G, gens)
        size = int(mask.sum())
        if size == target:
            break
    # drop redundant generators; for p-groups the result is a minimal
    # generating set (Burnside basis theorem)
    for g in list(gens):
        rest = [h for h in gens if h != g]
        if int(_closure_mask(G, rest).sum()) == target:
            gens = rest
    return gens


def subgroup_generate(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``gens``."""
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < G.order:
            raise ValueError(f"{g} is not an element")
    return Subgroup.from_mask(G, _closure_mask(G, gens))


def join(G: FiniteGroup, *subs: Subgroup) -> Subgroup:
    gens = [g for s in subs for g in s.gens()]
    return subgroup_generate(G, gens)


def product_set(G: FiniteGroup, A: Subgroup, B: Subgroup) -> np.ndarray:
    """Mask of the set AB."""
    m = np.zeros(G.order, dtype=bool)
    m[np.asarray(G.mul(A.members[:, None], B.members[None, :]), dtype=np.int64).ravel()] = True
    return m


def is_subgroup_set(G: FiniteGroup, members) -> bool:
    members = np.asarray(members, dtype=np.int64)
    mask = np.zeros(G.order, dtype=bool)
    mask[members] = True
    if not mask[0]:
        return False
    gens = _greedy_generators(G, members) if len(members) < 4096 else members
    return bool(mask[np.asarray(G.mul(members[:, None], np.asarray(gens, dtype=np.int64)[None, :]))].all()) and bool(
        mask[G.inv(members)].all()
    )


def is_normal(G: FiniteGroup, N: Subgroup) -> bool:
    return normality_witness(G, N) is None


def normality_witness(G: FiniteGroup, N: Subgroup):
    """(n, g) with g^-1 n g outside N, or None when N is normal."""
    n = np.array(N.gens(), dtype=np.int64)
    g = np.array(G.generators(), dtype=np.int64)
    if len(n) == 0 or len(g) == 0:
        return None
    c = np.asarray(G.conj(n[:, None], g[None, :]))
    bad = np.argwhere(~N.mask[c])
    if len(bad):
        i, j = bad[0]
        return int(n[i]), int(g[j])
    return None


def normal_closure(G: FiniteGroup, elems) -> Subgroup:
    gens = [int(e) for e in elems]
    mask = _closure_mask(G, gens)
    ggens = np.array(G.generators(), dtype=np.int64)
    while True:
        sub = Subgroup.from_mask(G, mask)
        n = np.array(sub.gens(), dtype=np.int64)
        if len(n) == 0 or len(ggens) == 0:
            return sub
        c = np.asarray(G.conj(n[:, None], ggens[None, :])).ravel()
        out = c[~mask[c]]
        if len(out) == 0:
            return sub
        mask = _closure_mask(G, list(n) + list(np.unique(out)))


def centralizer_mask(G: FiniteGroup, elems) -> np.ndarray:
    e = np.asarray(list(elems), dtype=np.int64)
    g = G.elements
    mask = np.ones(G.order, dtype=bool)
    for x in e:
        mask &= np.asarray(G.mul(g, x)) == np.asarray(G.mul(x, g))
    return mask


def center(G: FiniteGroup) -> Subgroup:
    if "center" not in G._cache:
        G._cache["center"] = Subgroup.from_mask(G, centralizer_mask(G, G.generators()))
    return G._cache["center"]


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    if "derived" not in G._cache:
        g = np.array(G.generators(), dtype=np.int64)
        comms = np.asarray(G.commutator(g[:, None], g[None, :])).ravel() if len(g) else []
        G._cache["derived"] = normal_closure(G, np.unique(comms))
    return G._cache["derived"]


def commutator_with_group(G: FiniteGroup, N: Subgroup) -> Subgroup:
    """[N, G] for a normal subgroup N."""
    n = np.array(N.gens(), dtype=np.int64)
    g = np.array(G.generators(), dtype=np.int64)
    if len(n) == 0:
        return G.trivial()
    comms = np.asarray(G.commutator(n[:, None], g[None, :])).ravel()
    return normal_closure(G, np.unique(comms))


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    series = [G.whole()]
    while True:
        nxt = commutator_with_group(G, series[-1])
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)
        if nxt.order == 1:
            return series


def exponent(G: FiniteGroup) -> int:
    return int(np.lcm.reduce(G.element_orders()))


def power_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    return subgroup_generate(G, np.unique(G.power(G.elements, p)))


def frattini_formula(G: FiniteGroup) -> Subgroup:
    """[G,G] G^p for a p-group."""
    p = G.prime()
    if p is None:
        if G.order == 1:
            return G.trivial()
        raise ValueError("formula route needs a p-group")
    D = derived_subgroup(G)
    P = np.unique(G.power(G.elements, p))
    return subgroup_generate(G, D.gens() + list(P))


def _bfs_words(G: FiniteGroup, gens: Sequence[int]):
    """Spanning tree of the Cayley graph: BFS order, parent, generator used."""
    n = G.order
    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    order = [np.zeros(1, dtype=np.int64)]
    frontier = order[0]
    g = np.asarray(gens, dtype=np.int64)
    while frontier.size:
        prods = np.asarray(G.mul(frontier[:, None], g[None, :]), dtype=np.int64)
        new_list = []
        for j in range(len(g)):
            col = prods[:, j]
            fresh = ~seen[col]
            cand = col[fresh]
            cand, first = np.unique(cand, return_index=True)
            if len(cand):
                seen[cand] = True
                parent[cand] = frontier[fresh][first]
                via[cand] = j
                new_list.append(cand)
        frontier = np.concatenate(new_list) if new_list else np.zeros(0, dtype=np.int64)
        if frontier.size:
            order.append(frontier)
    return order, parent, via


def _nullspace_mod_p(R: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of {c : R c = 0 mod p}."""
    R = np.asarray(R, dtype=np.int64) % p
    m, d = R.shape
    rows = []
    pivots = []
    # reduce rows one at a time into an echelon basis
    basis = np.zeros((0, d), dtype=np.int64)
    for r in np.unique(R, axis=0):
        v = r.copy()
        for b, pc in zip(basis, pivots):
            if v[pc]:
                v = (v - v[pc] * b) % p
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            continue
        pc = nz[0]
        v = (v * pow(int(v[pc]), -1, p)) % p
        basis = np.array([(b - b[pc] * v) % p for b in basis] + [v], dtype=np.int64).reshape(-1, d)
        pivots.append(pc)
    free = [c for c in range(d) if c not in pivots]
    null = []
    for f in free:
        c = np.zeros(d, dtype=np.int64)
        c[f] = 1
        for b, pc in zip(basis, pivots):
            c[pc] = (-b[f]) % p
        null.append(c)
    del rows
    return np.array(null, dtype=np.int64).reshape(-1, d)


def _hom_to_zp_data(G: FiniteGroup):
    """Word vectors w(h) in Z_p^d and the space of homomorphisms G -> Z_p."""
    p = G.prime()
    if p is None:
        raise ValueError("maximal subgroups via Z_p quotients need a p-group")
    gens = G.generators()
    d = len(gens)
    layers, parent, via = _bfs_words(G, gens)
    w = np.zeros((G.order, d), dtype=np.int64)
    for layer in layers[1:]:
        w[layer] = w[parent[layer]]
        w[layer, via[layer]] += 1
        w[layer] %= p
    g = np.asarray(gens, dtype=np.int64)
    prods = np.asarray(G.mul(G.elements[:, None], g[None, :]), dtype=np.int64)
    rel = (w[:, None, :] + np.eye(d, dtype=np.int64)[None, :, :] - w[prods]) % p
    rel = rel.reshape(-1, d)
    return p, w, _nullspace_mod_p(rel, p)


def maximal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All maximal subgroups of a p-group of order at most 1024.

    They are the kernels of the nonzero homomorphisms G -> Z_p, found from
    the relations of a Cayley-graph spanning tree (no use of [G,G] G^p).
    """
    if G.order > 1024:
        raise ValueError("maximal subgroup enumeration is capped at order 1024")
    if G.order == 1:
        return []
    p, w, null = _hom_to_zp_data(G)
    k = len(null)
    out = []
    for coeffs in itertools.product(range(p), repeat=k):
        nz = [x for x in coeffs if x]
        if not nz or nz[0] != 1:
            continue
        c = (np.array(coeffs, dtype=np.int64) @ null) % p
        out.append(Subgroup(G, np.nonzero((w @ c) % p == 0)[0]))
    out.sort(key=lambda s: tuple(s.members))
    return out


def frattini_maximal(G: FiniteGroup) -> Subgroup:
    """Intersection of all maximal subgroups (p-groups, order <= 1024)."""
    if G.order == 1:
        return G.trivial()
    p, w, null = _hom_to_zp_data(G)
    if len(null) == 0:
        return G.whole()
    vals = (w @ null.T) % p
    return Subgroup(G, np.nonzero((vals == 0).all(axis=1))[0])


def frattini(G: FiniteGroup, method: str = "auto") -> Subgroup:
    if method == "auto":
        method = "maximal" if G.order <= 1024 and G.prime() is not None else "formula"
    key = "frattini_" + method
    if key not in G._cache:
        G._cache[key] = frattini_maximal(G) if method == "maximal" else frattini_formula(G)
    return G._cache[key]


@dataclass
class GroupProfile:
    order: int
    center: Subgroup
    derived: Subgroup
    frattini: Subgroup
    exponent: int
    nilpotency_class: int | None
    lower_central_series: list[Subgroup]
    is_special: bool
    frattini_method: str = ""

    def summary(self) -> dict:
        return {
            "order": self.order,
            "center": self.center.order,
            "derived": self.derived.order,
            "frattini": self.frattini.order,
            "exponent": self.exponent,
            "class": self.nilpotency_class,
            "lower_central_series": [s.order for s in self.lower_central_series],
            "special": self.is_special,
        }


def structure_profile(G: FiniteGroup) -> GroupProfile:
    if G.order > PROFILE_LIMIT:
        raise ValueError(f"order {G.order} exceeds {PROFILE_LIMIT}")
    Z = center(G)
    D = derived_subgroup(G)
    method = "maximal" if G.order <= 1024 and G.prime() is not None else "formula"
    F = frattini(G, method) if G.prime() is not None or G.order == 1 else None
    if F is None:
        raise ValueError("Frattini subgroup only implemented for p-groups")
    lcs = lower_central_series(G)
    nil = len(lcs) - 1 if lcs[-1].order == 1 else None
    special = (not G.is_abelian()) and Z == D == F
    return GroupProfile(G.order, Z, D, F, exponent(G), nil, lcs, special, method)


# ---------------------------------------------------------------- constructors


def _check_assoc(table: np.ndarray, rng: np.random.Generator | None = None, samples: int = 10**6):
    n = len(table)
    if n <= 512:
        for a in range(n):
            lhs = table[table[a]]  # (ab)c  as rows over b, cols over c
            rhs = table[a][table]  # a(bc)
            if not (lhs == rhs).all():
                b, c = np.argwhere(lhs != rhs)[0]
                return (a, int(b), int(c))
        return None
    rng = rng or np.random.default_rng(0)
    x = rng.integers(0, n, size=(3, samples))
    lhs = table[table[x[0], x[1]], x[2]]
    rhs = table[x[0], table[x[1], x[2]]]
    bad = np.nonzero(lhs != rhs)[0]
    return None if len(bad) == 0 else tuple(int(v) for v in x[:, bad[0]])


def group_from_law(domain_size: int, law: Callable, name: str = "") -> FiniteGroup:
    """Verified group from a binary operation on 0..domain_size-1.

    If the identity is some e != 0, the labels 0 and e are swapped.
    """
    n = int(domain_size)
    ar = np.arange(n, dtype=np.int64)
    try:
        table = np.asarray(law(ar[:, None], ar[None, :]), dtype=np.int64)
        if table.shape != (n, n):
            raise ValueError
    except Exception:
        table = np.array([[law(int(a), int(b)) for b in range(n)] for a in range(n)], dtype=np.int64)
    if table.min() < 0 or table.max() >= n:
        raise ValueError("law is not closed on the domain")
    ids = [e for e in range(n) if (table[e] == ar).all() and (table[:, e] == ar).all()]
    if not ids:
        raise ValueError("no identity element")
    e = ids[0]
    if e != 0:
        perm = ar.copy()
        perm[0], perm[e] = e, 0
        table = perm[table[np.ix_(perm, perm)]]
    for a in range(n):
        if len(np.unique(table[a])) != n or len(np.unique(table[:, a])) != n:
            raise ValueError(f"element {a} has no inverse")
    bad = _check_assoc(table)
    if bad is not None:
        raise ValueError(f"law is not associative at {bad}")
    return FiniteGroup(n, table=table, name=name or f"group of order {n}")


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_law(n, lambda a, b: (a + b) % n, name=f"Z{n}")


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    n = p**k
    if p == 2:
        return FiniteGroup(n, law=lambda a, b: a ^ b, name=f"E{n}", spec=("elementary", p, k))
    w = p ** np.arange(k, dtype=np.int64)

    def law(a, b):
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        da = (a[..., None] // w) % p
        db = (b[..., None] // w) % p
        return ((da + db) % p) @ w

    return FiniteGroup(n, law=law, name=f"E{n}", spec=("elementary", p, k))


def group_from_permutations(gens: Sequence[np.ndarray], name: str = ""):
    """Closure of permutations under composition.

    Product convention: (a*b)[x] = a[b[x]].  Returns the group and the list
    of permutations indexed by element.
    """
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    deg = len(gens[0]) if gens else 0
    ident = np.arange(deg, dtype=np.int64)
    perms = [ident]
    index = {ident.tobytes(): 0}
    i = 0
    while i < len(perms):
        for g in gens:
            h = perms[i][g]
            k = h.tobytes()
            if k not in index:
                index[k] = len(perms)
                perms.append(h)
        i += 1
    n = len(perms)
    P = np.array(perms)
    table = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        comp = P[a][P]  # row b: a[b[x]]
        table[a] = [index[r.tobytes()] for r in comp]
    return FiniteGroup(n, table=table, name=name or f"permutation group of order {n}"), perms


def _digit_codec(q: int, k: int):
    w = q ** np.arange(k, dtype=np.int64)

    def decode(x):
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // w) % q

    def encode(d):
        return np.asarray(d, dtype=np.int64) @ w

    return decode, encode


def heisenberg(n: int, q: int) -> FiniteGroup:
    """H_n(q) on triples (alpha, c, beta), alpha, beta in F_q^n.

    (alpha,c,beta)(alpha',c',beta') = (alpha+alpha', c+c'+<alpha,beta'>, beta+beta').
    Index digits (base q, low first): alpha_1..alpha_n, c, beta_1..beta_n.
    """
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    if (n == 1 and q > 27) or (n == 2 and q > 9):
        raise ValueError(f"q = {q} out of range for n = {n}")
    F = field_of_order(q)
    k = 2 * n + 1
    decode, encode = _digit_codec(q, k)
    add, mul = F.add, F.mul

    def law(x, y):
        X, Y = decode(x), decode(y)
        X, Y = np.broadcast_arrays(X, Y)
        out = add[X, Y]
        dot = add[X[..., n], Y[..., n]]
        for i in range(n):
            dot = add[dot, mul[X[..., i], Y[..., n + 1 + i]]]
        out = out.copy()
        out[..., n] = dot
        return encode(out)

    def coords(g):
        d = decode(g)
        return tuple(int(v) for v in d)

    def enc(alpha, c, beta):
        return int(encode(list(alpha) + [c] + list(beta)))

    G = FiniteGroup(
        q**k,
        law=law,
        name=f"H_{n}({q})",
        spec=("heisenberg", n, q),
        coords=coords,
        encode=lambda t: int(encode(list(t))),
    )
    G.field = F
    G.heis = (n, q, enc)
    return G


def _st_parts(q: int):
    F = field_of_order(q)
    sig = tits_endomorphism(F).table
    add, mul = F.add, F.mul
    return F, sig, add, mul


def suzuki_tits_group(q: int) -> FiniteGroup:
    """Group of order q^5 on [a,b,c,d,e] over F_q, q in {2, 8}.

    [a,b,c,d,e][a',b',c',d',e'] = [a+a', b+b'+a a'^s, c+c'+d(a'^(s+1)+b')+e a',
    d+d', e+e'+d a'^s] with s the Tits endomorphism.
    Index digits (base q, low first): a, b, c, d, e.
    """
    if q not in (2, 8):
        raise ValueError("q must be 2 or 8")
    F, sig, add, mul = _st_parts(q)
    decode, encode = _digit_codec(q, 5)

    def law(x, y):
        X, Y = decode(x), decode(y)
        X, Y = np.broadcast_arrays(X, Y)
        a, b, c, d, e = (X[..., i] for i in range(5))
        a2, b2, c2, d2, e2 = (Y[..., i] for i in range(5))
        sa2 = sig[a2]
        out = np.stack(
            [
                add[a, a2],
                add[add[b, b2], mul[a, sa2]],
                add[add[add[c, c2], mul[d, add[mul[sa2, a2], b2]]], mul[e, a2]],
                add[d, d2],
                add[add[e, e2], mul[d, sa2]],
            ],
            axis=-1,
        )
        return encode(out)

    G = FiniteGroup(
        q**5,
        law=law,
        name=f"ST({q})",
        spec=("suzuki_tits", q),
        coords=lambda g: tuple(int(v) for v in decode(g)),
        encode=lambda t: int(encode(list(t))),
    )
    G.field = F
    G.sigma = sig
    return G


def suzuki_tits_matrix(q: int, coords: np.ndarray) -> np.ndarray:
    """5x5 matrices over F_q of the collineations [a,b,c,d,e] (batched)."""
    F, sig, add, mul = _st_parts(q)
    c = np.asarray(coords, dtype=np.int64)
    a, b, cc, d, e = (c[..., i] for i in range(5))
    sa = sig[a]
    fab = add[add[mul[mul[sa, a], a], mul[a, b]], sig[b]]
    M = np.zeros(c.shape[:-1] + (5, 5), dtype=np.int64)
    for i in range(5):
        M[..., i, i] = 1
    M[..., 0, 2] = cc
    M[..., 0, 3] = d
    M[..., 0, 4] = e
    M[..., 1, 2] = fab
    M[..., 1, 3] = a
    M[..., 1, 4] = b
    M[..., 3, 2] = add[mul[sa, a], b]
    M[..., 3, 4] = sa
    M[..., 4, 2] = a
    return M


def suzuki_tits_matrix_check(G: FiniteGroup, samples: int = 10**6, seed: int = 0, chunk: int = 10**5) -> dict:
    """Random triples: (xy)z = x(yz) under the law, and M(xy) = M(x)M(y)
    against the matrix model, so associativity is transported from matrices."""
    if G.spec is None or G.spec[0] != "suzuki_tits":
        raise ValueError("needs a Suzuki-Tits group")
    q = G.spec[1]
    F = G.field
    decode, _ = _digit_codec(q, 5)
    rng = np.random.default_rng(seed)
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        x, y, z = rng.integers(0, G.order, size=(3, m))
        xy = G.mul(x, y)
        lhs, rhs = G.mul(xy, z), G.mul(x, G.mul(y, z))
        bad = np.nonzero(lhs != rhs)[0]
        if len(bad):
            i = int(bad[0])
            return {"verdict": False, "reason": "associativity", "triple": [int(x[i]), int(y[i]), int(z[i])], "checked": done}
        Mx, My = suzuki_tits_matrix(q, decode(x)), suzuki_tits_matrix(q, decode(y))
        ok = (suzuki_tits_matrix(q, decode(xy)) == field_matmul(F, Mx, My)).all(axis=(-1, -2))
        if not ok.all():
            i = int(np.argmin(ok))
            return {"verdict": False, "reason": "matrix model", "pair": [int(x[i]), int(y[i])], "checked": done}
        done += m
    return {"verdict": True, "checked": done, "seed": seed}


def field_matmul(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Batched matrix product over F using its tables."""
    n = A.shape[-1]
    out = np.zeros(A.shape[:-1] + (B.shape[-1],), dtype=np.int64)
    for k in range(n):
        out = F.add[out, F.mul[A[..., :, k, None], B[..., None, k, :]]]
    return out


# ---------------------------------------------------------------- quotient


def quotient(G: FiniteGroup, N: Subgroup):
    """G/N with cosets ordered by their minimal element.

    Returns (Q, proj) where proj maps each element of G to its coset index.
    Q carries ``reps`` (minimal coset representatives).
    """
    w = normality_witness(G, N)
    if w is not None:
        raise ValueError(f"subgroup is not normal: {w[1]}^-1 {w[0]} {w[1]} escapes")
    cos = np.asarray(G.mul(G.elements[:, None], N.members[None, :]), dtype=np.int64)
    rep_of = cos.min(axis=1)
    reps = np.unique(rep_of)
    proj = np.searchsorted(reps, rep_of)
    m = len(reps)

    def law(x, y):
        return proj[np.asarray(G.mul(reps[x], reps[y]), dtype=np.int64)]

    # a quotient of a law-based group stays law-based
    Q = FiniteGroup(m, law=law, name=f"{G.name}/N{N.order}", tabulate=G.table is not None)
    Q.reps = reps
    Q.proj = proj
    Q.parent_group = G
    return Q, proj


# ---------------------------------------------------------------- chi form


@dataclass
class ChiForm:
    group: FiniteGroup
    phi: Subgroup
    derived: Subgroup
    V: FiniteGroup
    proj: np.ndarray
    table: np.ndarray  # table[u, v] = [rep u, rep v] in G


def chi_form(G: FiniteGroup) -> ChiForm:
    """Commutator form on V = G/Phi(G) with values in [G,G]."""
    Z = center(G)
    D = derived_subgroup(G)
    if not D.issubset(Z) or G.is_abelian():
        raise ValueError("G must be nilpotent of class 2")
    Phi = frattini(G)
    if Phi != D:
        raise ValueError("need Phi(G) = [G,G]")
    V, proj = quotient(G, Phi)
    r = V.reps
    table = np.asarray(G.commutator(r[:, None], r[None, :]), dtype=np.int64)
    return ChiForm(G, Phi, D, V, proj, table)


def ban_check(chi: ChiForm, q: int) -> dict:
    """Checks that chi is a BAN-form over F_q.

    The scalar action on V and the identification [G,G] = (F_q,+) are
    declared as follows.  For prime q, lambda.v = v^lambda and z0^k <-> k for
    the least nontrivial z0 in [G,G].  Otherwise the group must carry
    Heisenberg coordinates; lambda acts on (alpha, beta) coordinatewise and
    (0,c,0) <-> c.
    """
    G, V = chi.group, chi.V
    T = chi.table
    nV = V.order
    D = chi.derived
    if D.order != q:
        raise ValueError(f"|[G,G]| = {D.order} differs from q = {q}")
    out: dict = {}
    # well defined: independent of coset representatives
    phi = chi.phi.members
    reps = V.reps
    left = np.asarray(G.mul(reps[:, None], phi[None, :]), dtype=np.int64)  # nV x |phi|
    ok = True
    for j in range(len(phi)):
        alt = np.asarray(G.commutator(left[:, j][:, None], reps[None, :]))
        if not (alt == T).all():
            ok = False
            break
    out["well_defined"] = ok
    # bi-additive
    u = np.arange(nV)
    uv = np.asarray(V.mul(u[:, None], u[None, :]))  # nV x nV
    lhs = T[uv]  # [u*v, w] indexed (u, v, w)
    rhs = np.asarray(G.mul(T[:, None, :], T[None, :, :]))
    out["biadditive_left"] = bool((lhs == rhs).all())
    lhs2 = T[u[:, None, None], uv[None, :, :]]  # [u, v*w]
    rhs2 = np.asarray(G.mul(T[:, :, None], T[:, None, :]))
    out["biadditive_right"] = bool((lhs2 == rhs2).all())
    out["alternating"] = bool((np.diag(T) == 0).all())
    radical = [int(x) for x in np.nonzero((T == 0).all(axis=1))[0]]
    out["nondegenerate"] = radical == [0]
    # scalar transport
    F = field_of_order(q)
    if is_prime(q):
        z0 = int(D.members[1])
        iso = {}
        z = 0
        for k in range(q):
            iso[int(z)] = k
            z = int(G.mul(z, z0))
        scal = {lam: np.asarray(V.power(u, lam)) for lam in range(q)}
        out["scalar_action"] = "power map v -> v^lambda"
        out["isomorphism"] = f"z0^k -> k with z0 = {G.label(z0)}"
    else:
        if not hasattr(G, "heis"):
            raise ValueError("no F_q-structure declared for V")
        n, _, enc = G.heis
        iso = {}
        for c in range(q):
            iso[enc([0] * n, c, [0] * n)] = c
        scal = {}
        for lam in range(q):
            img = np.zeros(nV, dtype=np.int64)
            for v in range(nV):
                t = G.coords(int(reps[v]))
                al, be = t[:n], t[n + 1 :]
                g = enc([int(F.mul[lam, a]) for a in al], 0, [int(F.mul[lam, b]) for b in be])
                img[v] = V.proj[g]
            scal[lam] = img
        out["scalar_action"] = "coordinatewise on (alpha, beta)"
        out["isomorphism"] = "(0,c,0) -> c"
    inv_iso = {v: k for k, v in iso.items()}
    lin = True
    for lam in range(q):
        lhs = T[scal[lam]]
        want = np.vectorize(lambda z: inv_iso[int(F.mul[lam, iso[int(z)]])])(T)
        if not (lhs == want).all():
            lin = False
            break
    out["fq_bilinear"] = lin
    out["iso_table"] = {G.label(k): v for k, v in sorted(iso.items())}
    out["verdict"] = all(
        out[k] for k in ("well_defined", "biadditive_left", "biadditive_right", "alternating", "nondegenerate", "fq_bilinear")
    )
    return out


# ---------------------------------------------------------------- subgroup enumeration


def _cyclic_reps(G: FiniteGroup, max_order: int | None = None):
    """One generator per cyclic subgroup, with the subgroup masks."""
    seen: dict[bytes, int] = {}
    out = []
    orders = G.element_orders()
    for g in range(1, G.order):
        if max_order is not None and orders[g] > max_order:
            continue
        m = _closure_mask(G, [g])
        k = np.nonzero(m)[0].tobytes()
        if k not in seen:
            seen[k] = g
            out.append((g, m))
    return out


def subgroups(G: FiniteGroup, max_order: int | None = None, abelian: bool = False) -> list[Subgroup]:
    """All subgroups of order <= max_order by cyclic extension.

    Each subgroup is reached from a smaller one by joining a cyclic subgroup.
    With ``abelian`` only elements centralizing the current subgroup are
    joined, which yields exactly the abelian subgroups.
    """
    if G.order > 1024:
        raise ValueError("subgroup enumeration is capped at order 1024")
    if max_order is None:
        max_order = G.order
    cyc = _cyclic_reps(G, max_order)
    found: dict[bytes, Subgroup] = {}
    triv = G.trivial()
    found[triv.key] = triv
    queue = [triv]
    i = 0
    while i < len(queue):
        K = queue[i]
        i += 1
        if abelian and K.order > 1:
            cent = centralizer_mask(G, K.gens())
        for g, cm in cyc:
            if K.mask[g]:
                continue
            if abelian and K.order > 1 and not cent[g]:
                continue
            m = _closure_mask(G, K.gens() + [g], limit=max_order)
            if m is None:
                continue
            S = Subgroup.from_mask(G, m)
            if S.key not in found:
                found[S.key] = S
                queue.append(S)
    out = list(found.values())
    out.sort(key=lambda s: (s.order, tuple(s.members)))
    return out


def abelian_subgroups_of_order(G: FiniteGroup, m: int) -> list[Subgroup]:
    if G.order > 1024:
        raise ValueError("bound exceeded: order > 1024")
    if G.order % m:
        raise ValueError(f"{m} does not divide {G.order}")
    return [S for S in subgroups(G, max_order=m, abelian=True) if S.order == m]


# ---------------------------------------------------------------- isomorphism


def _fingerprint(G: FiniteGroup) -> dict:
    o = G.element_orders()
    vals, counts = np.unique(o, return_counts=True)
    fp = {
        "order": G.order,
        "element_orders": tuple(zip(vals.tolist(), counts.tolist())),
        "center": center(G).order,
        "derived": derived_subgroup(G).order,
        "exponent": exponent(G),
    }
    lcs = lower_central_series(G)
    fp["class"] = len(lcs) - 1 if lcs[-1].order == 1 else None
    Q, _ = quotient(G, derived_subgroup(G))
    qo = Q.element_orders()
    v2, c2 = np.unique(qo, return_counts=True)
    fp["abelianization"] = (Q.order, tuple(zip(v2.tolist(), c2.tolist())))
    return fp


def _class_sizes(G: FiniteGroup) -> np.ndarray:
    if "class_sizes" not in G._cache:
        g = G.elements
        gens = G.generators()
        # centralizer order of each element via commuting with all elements
        if G.table is not None:
            T = G.table
            cent = (T == T.T).sum(axis=1)
        else:
            cent = np.array([int((G.mul(g, x) == G.mul(x, g)).sum()) for x in g])
        G._cache["class_sizes"] = G.order // cent
        del gens
    return G._cache["class_sizes"]


def _hom_searcher(G1: FiniteGroup, G2: FiniteGroup):
    gens = G1.generators()
    d = len(gens)
    # BFS trees of the prefix subgroups <g_1..g_k>
    prefix = []
    for k in range(1, d + 1):
        sub = Subgroup.from_mask(G1, _closure_mask(G1, gens[:k]))
        layers = [np.zeros(1, dtype=np.int64)]
        parent = np.full(G1.order, -1, dtype=np.int64)
        via = np.full(G1.order, -1, dtype=np.int64)
        seen = np.zeros(G1.order, dtype=bool)
        seen[0] = True
        frontier = layers[0]
        g = np.asarray(gens[:k], dtype=np.int64)
        while frontier.size:
            prods = np.asarray(G1.mul(frontier[:, None], g[None, :]), dtype=np.int64)
            new = []
            for j in range(k):
                col = prods[:, j]
                fresh = ~seen[col]
                cand, first = np.unique(col[fresh], return_index=True)
                if len(cand):
                    seen[cand] = True
                    parent[cand] = frontier[fresh][first]
                    via[cand] = j
                    new.append(cand)
            frontier = np.concatenate(new) if new else np.zeros(0, dtype=np.int64)
            if frontier.size:
                layers.append(frontier)
        edges = np.asarray(G1.mul(sub.members[:, None], g[None, :]), dtype=np.int64)
        prefix.append((sub, layers, parent, via, edges))

    o1, o2 = G1.element_orders(), G2.element_orders()
    c1, c2 = _class_sizes(G1), _class_sizes(G2)
    cands = [np.nonzero((o2 == o1[g]) & (c2 == c1[g]))[0] for g in gens]

    def extend(images: list[int]):
        k = len(images)
        sub, layers, parent, via, edges = prefix[k - 1]
        img = np.full(G1.order, -1, dtype=np.int64)
        img[0] = 0
        gi = np.asarray(images, dtype=np.int64)
        for layer in layers[1:]:
            img[layer] = np.asarray(G2.mul(img[parent[layer]], gi[via[layer]]), dtype=np.int64)
        m = sub.members
        if not (img[edges] == np.asarray(G2.mul(img[m][:, None], gi[None, :]))).all():
            return None
        if len(np.unique(img[m])) != len(m):
            return None
        return img

    def search(find_all: bool):
        results = []
        images: list[int] = []

        def rec():
            k = len(images)
            if k == d:
                img = extend(images) if d else np.zeros(1, dtype=np.int64)
                results.append(img)
                return not find_all
            used = None
            if k:
                prev = extend(images)
                used = np.zeros(G2.order, dtype=bool)
                used[prev[prefix[k - 1][0].members]] = True
            for c in cands[k]:
                if used is not None and used[c]:
                    continue
                images.append(int(c))
                ok = extend(images) is not None
                if ok and rec():
                    return True
                images.pop()
            return False

        rec()
        return results

    return gens, search


def automorphisms(G: FiniteGroup) -> list[np.ndarray]:
    """All automorphisms as element permutations (order <= 1024)."""
    if G.order > 1024:
        raise ValueError("automorphism search capped at order 1024")
    if "auts" not in G._cache:
        _, search = _hom_searcher(G, G)
        auts = search(True)
        auts.sort(key=lambda a: tuple(a))
        G._cache["auts"] = auts
    return G._cache["auts"]


@dataclass
class IsoResult:
    verdict: bool | None
    witness: np.ndarray | None = None
    invariant: str | None = None

    def __bool__(self) -> bool:
        return bool(self.verdict)


def group_isomorphic(G1: FiniteGroup, G2: FiniteGroup) -> IsoResult:
    if G1.order != G2.order:
        return IsoResult(False, invariant=f"order {G1.order} != {G2.order}")
    if G1 is G2 or (
        G1.table is not None and G2.table is not None and np.array_equal(G1.table, G2.table)
    ):
        return IsoResult(True, witness=G1.elements)
    f1, f2 = _fingerprint(G1), _fingerprint(G2)
    for k in f1:
        if f1[k] != f2[k]:
            return IsoResult(False, invariant=f"{k}: {f1[k]} vs {f2[k]}")
    if G1.order > 1024:
        return IsoResult(None, invariant="inconclusive: fingerprints agree, order above search bound")
    gens, search = _hom_searcher(G1, G2)
    res = search(False)
    if res:
        return IsoResult(True, witness=res[0])
    return IsoResult(False, invariant="no generator mapping extends to an isomorphism")
