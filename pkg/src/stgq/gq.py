"""Point-line geometries, GQ axioms, perps and spans, isomorphism.

Incidence is a boolean matrix ``inc[point, line]``.  Collinearity and
concurrency matrices are derived once and cached; every perp is an AND of
their rows.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PointLineGeometry",
    "GQVerdict",
    "TriadRecord",
    "GeomIso",
    "verify_gq",
    "perp",
    "span",
    "is_regular_pair",
    "regular_points",
    "regularity",
    "antiregularity",
    "ar1_check",
    "triad_centers",
    "three_regular",
    "property_g",
    "dualize",
    "gq_isomorphic",
    "find_pentagon",
    "iso_search",
    "GeometryAutomorphism",
    "closure_of",
    "is_closed",
    "automorphisms_fixing",
    "line_map_from_points",
    "perp_mask",
    "span_size_distribution",
]


class PointLineGeometry:
    """Incidence structure on points 0..n_points-1 and lines 0..n_lines-1."""

    def __init__(
        self,
        n_points: int,
        lines: Sequence[Iterable[int]],
        name: str = "",
        point_labels: list | None = None,
        line_labels: list | None = None,
    ):
        self.n_points = int(n_points)
        self.lines = [np.array(sorted(int(p) for p in L), dtype=np.int64) for L in lines]
        self.n_lines = len(self.lines)
        self.name = name
        self.point_labels = point_labels
        self.line_labels = line_labels
        inc = np.zeros((self.n_points, self.n_lines), dtype=bool)
        for j, L in enumerate(self.lines):
            if len(L) and (L.min() < 0 or L.max() >= self.n_points):
                raise ValueError(f"line {j} has an out-of-range point")
            inc[L, j] = True
        self.inc = inc
        self.point_lines = [np.nonzero(inc[p])[0] for p in range(self.n_points)]
        self.order: tuple[int, int] | None = None
        self._col = None
        self._con = None
        self._line_index = None

    def __repr__(self) -> str:
        return f"<geometry {self.name or ''} {self.n_points} points, {self.n_lines} lines>"

    @property
    def collinear(self) -> np.ndarray:
        """collinear[p, q]: p and q share a line (diagonal True)."""
        if self._col is None:
            i = self.inc.astype(np.int32)
            c = (i @ i.T) > 0
            np.fill_diagonal(c, True)
            self._col = c
        return self._col

    @property
    def concurrent(self) -> np.ndarray:
        if self._con is None:
            i = self.inc.astype(np.int32)
            c = (i.T @ i) > 0
            np.fill_diagonal(c, True)
            self._con = c
        return self._con

    def line_through(self, p: int, q: int) -> int:
        """Common line of p != q, or -1."""
        both = np.nonzero(self.inc[p] & self.inc[q])[0]
        return int(both[0]) if len(both) else -1

    def meet(self, L: int, M: int) -> int:
        """Common point of lines L != M, or -1."""
        both = np.nonzero(self.inc[:, L] & self.inc[:, M])[0]
        return int(both[0]) if len(both) else -1

    def line_index(self) -> dict[bytes, int]:
        if self._line_index is None:
            self._line_index = {L.tobytes(): j for j, L in enumerate(self.lines)}
        return self._line_index

    def find_line(self, points) -> int:
        key = np.array(sorted(int(p) for p in points), dtype=np.int64).tobytes()
        return self.line_index().get(key, -1)

    def dual(self) -> "PointLineGeometry":
        return dualize(self)

    def is_automorphism(self, pmap: np.ndarray, lmap: np.ndarray) -> bool:
        return bool((self.inc[np.ix_(pmap, lmap)] == self.inc).all()) and len(set(pmap.tolist())) == self.n_points


# ---------------------------------------------------------------- axioms


@dataclass
class GQVerdict:
    ok: bool
    order: tuple[int, int] | None = None
    axiom: str = ""
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def find_pentagon(geom: PointLineGeometry):
    """First ordinary pentagon (5 points), earliest index first, or None."""
    C = geom.collinear
    n = geom.n_points
    for p0 in range(n):
        nb0 = np.nonzero(C[p0])[0]
        for p1 in nb0:
            if p1 == p0:
                continue
            for p2 in np.nonzero(C[p1] & ~C[p0])[0]:
                for p3 in np.nonzero(C[p2] & ~C[p1] & ~C[p0])[0]:
                    cand = np.nonzero(C[p3] & C[p0] & ~C[p1] & ~C[p2])[0]
                    cand = cand[(cand != p0) & (cand != p3)]
                    if len(cand):
                        return [int(p0), int(p1), int(p2), int(p3), int(cand[0])]
    return None


def verify_gq(geom: PointLineGeometry) -> GQVerdict:
    """Checks the GQ axioms and returns the order (s, t)."""
    if geom.n_points == 0 or geom.n_lines == 0:
        return GQVerdict(False, axiom="nonempty", witness={})
    inc = geom.inc
    line_sizes = inc.sum(axis=0)
    degs = inc.sum(axis=1)
    if (line_sizes != line_sizes[0]).any():
        j = int(np.nonzero(line_sizes != line_sizes[0])[0][0])
        return GQVerdict(False, axiom="constant line size", witness={"line": j, "size": int(line_sizes[j])})
    if (degs != degs[0]).any():
        p = int(np.nonzero(degs != degs[0])[0][0])
        return GQVerdict(False, axiom="constant point degree", witness={"point": p, "degree": int(degs[p])})
    s, t = int(line_sizes[0]) - 1, int(degs[0]) - 1
    i = inc.astype(np.int32)
    shared = i.T @ i
    np.fill_diagonal(shared, 0)
    if (shared >= 2).any():
        L, M = (int(v) for v in np.argwhere(shared >= 2)[0])
        pts = np.nonzero(inc[:, L] & inc[:, M])[0][:2].tolist()
        return GQVerdict(False, axiom="no digon", witness={"lines": [L, M], "points": pts})
    N = geom.collinear.astype(np.int32) @ i  # points of L collinear with p
    anti = ~inc
    if (N[anti] != 1).any():
        p, L = (int(v) for v in np.argwhere(anti & (N != 1))[0])
        on = [int(x) for x in geom.lines[L] if geom.collinear[p, x]]
        if len(on) == 0:
            return GQVerdict(False, axiom="projection exists", witness={"point": p, "line": L})
        return GQVerdict(False, axiom="no triangle", witness={"point": p, "line": L, "collinear_on_line": on})
    pent = find_pentagon(geom)
    if pent is None:
        return GQVerdict(False, axiom="pentagon (thickness)", witness={"order": [s, t]})
    geom.order = (s, t)
    return GQVerdict(True, order=(s, t), witness={"pentagon": pent})


def _order(geom: PointLineGeometry) -> tuple[int, int]:
    if geom.order is None:
        v = verify_gq(geom)
        if not v:
            raise ValueError(f"not a GQ: {v.axiom}")
    return geom.order


# ---------------------------------------------------------------- perp / span


def perp_mask(geom: PointLineGeometry, points: Iterable[int]) -> np.ndarray:
    pts = list(points)
    return geom.collinear[pts].all(axis=0) if pts else np.ones(geom.n_points, dtype=bool)


def perp(geom: PointLineGeometry, points: Iterable[int]) -> np.ndarray:
    return np.nonzero(perp_mask(geom, points))[0]


def span(geom: PointLineGeometry, p: int, q: int) -> np.ndarray:
    """{p,q}^perp-perp."""
    if p == q:
        raise ValueError("span needs two distinct points")
    return perp(geom, perp(geom, [p, q]))


def _span_sizes_from(geom: PointLineGeometry, p: int):
    """(q, |span(p,q)|) for every q not collinear with p."""
    C = geom.collinear
    qs = np.nonzero(~C[p])[0]
    if len(qs) == 0:
        return qs, qs
    P = (C[p][None, :] & C[qs]).astype(np.int32)  # perp rows
    k = P.sum(axis=1)
    cnt = P @ C.astype(np.int32)
    spans = (cnt == k[:, None]).sum(axis=1)
    return qs, spans


def is_regular_pair(geom: PointLineGeometry, p: int, q: int) -> bool:
    s, t = _order(geom)
    if p == q:
        raise ValueError("pair needs distinct points")
    if geom.collinear[p, q]:
        return True
    return len(span(geom, p, q)) == t + 1


def regular_points(geom: PointLineGeometry) -> np.ndarray:
    """Mask of regular points."""
    s, t = _order(geom)
    out = np.zeros(geom.n_points, dtype=bool)
    for p in range(geom.n_points):
        _, sp = _span_sizes_from(geom, p)
        out[p] = bool((sp == t + 1).all())
    return out


def regularity(geom: PointLineGeometry, obj, kind: str = "point") -> bool:
    """Regularity of a point, a line, or a pair (p, q) of points."""
    if kind == "pair":
        return is_regular_pair(geom, *obj)
    if kind == "line":
        D = dualize(geom)
        return regularity(D, obj, "point")
    s, t = _order(geom)
    _, sp = _span_sizes_from(geom, int(obj))
    return bool((sp == t + 1).all())


def span_size_distribution(geom: PointLineGeometry) -> dict[int, int]:
    dist: dict[int, int] = {}
    for p in range(geom.n_points):
        qs, sp = _span_sizes_from(geom, p)
        for v in sp[qs > p]:
            dist[int(v)] = dist.get(int(v), 0) + 1
    return dict(sorted(dist.items()))


def antiregularity(geom: PointLineGeometry, x: int) -> bool:
    """Every noncollinear pair {x, y} has |{x,y}^perp cap z^perp| <= 2."""
    _order(geom)
    C = geom.collinear
    Ci = C.astype(np.int32)
    for y in np.nonzero(~C[x])[0]:
        P = C[x] & C[y]
        cnt = Ci @ P.astype(np.int32)
        cnt[[x, y]] = 0
        if cnt.max() > 2:
            return False
    return True


def ar1_check(geom: PointLineGeometry, x: int, pair: tuple[int, int] | None = None) -> dict:
    """No line triad {U,V,W} with U on x and a center on x has two or more
    centers off x.  ``pair = (U, X)`` restricts to one line U and center X."""
    _order(geom)
    D = geom.concurrent
    on_x = geom.inc[x]
    lines_x = np.nonzero(on_x)[0]
    checked = 0
    pairs = [(U, X) for U in lines_x for X in lines_x] if pair is None else [tuple(int(v) for v in pair)]
    for U, X in pairs:
        if X == U:
            continue
        cand = np.nonzero(D[X] & ~on_x & ~D[U])[0]
        for a, V in enumerate(cand):
            for W in cand[a + 1 :]:
                if D[V, W]:
                    continue
                checked += 1
                centers = np.nonzero(D[U] & D[V] & D[W])[0]
                off = [int(c) for c in centers if not on_x[c]]
                if len(off) > 1:
                    return {
                        "verdict": False,
                        "triad": [int(U), int(V), int(W)],
                        "centers_off_x": off,
                        "triads_checked": checked,
                    }
    return {"verdict": True, "triads_checked": checked}


# ---------------------------------------------------------------- triads


@dataclass
class TriadRecord:
    triad: tuple[int, int, int]
    kind: str
    centers: list[int]
    span: list[int]


def triad_centers(geom: PointLineGeometry, triad: Sequence[int], kind: str = "points") -> TriadRecord:
    M = geom.collinear if kind == "points" else geom.concurrent
    a, b, c = (int(v) for v in triad)
    if len({a, b, c}) < 3 or M[a, b] or M[a, c] or M[b, c]:
        raise ValueError("not a triad")
    cen = np.nonzero(M[a] & M[b] & M[c])[0]
    sp = np.nonzero(M[cen].all(axis=0))[0] if len(cen) else np.zeros(0, dtype=np.int64)
    return TriadRecord((a, b, c), kind, [int(v) for v in cen], [int(v) for v in sp])


def three_regular(geom: PointLineGeometry, line_triad: Sequence[int]) -> bool:
    s, t = _order(geom)
    r = triad_centers(geom, line_triad, "lines")
    return len(r.centers) == len(r.span) == t + 1


def _property_g_pair(geom: PointLineGeometry, U: int, V: int):
    D = geom.concurrent
    cand = np.nonzero(D[U] & ~D[V])[0]
    n = 0
    for a, W in enumerate(cand):
        for Z in cand[a + 1 :]:
            if D[W, Z]:
                continue
            n += 1
            if not three_regular(geom, (V, W, Z)):
                return False, [int(V), int(W), int(Z)], n
    return True, None, n


def property_g(geom: PointLineGeometry, obj, kind: str = "point") -> dict:
    """Property (G) at a pair of lines, a flag (x, L) or a point x."""
    s, t = _order(geom)
    if s != t * t:
        raise ValueError("Property (G) needs a GQ of order (t^2, t)")
    if kind == "pair":
        pairs = [tuple(obj)]
    elif kind == "flag":
        x, L = obj
        pairs = [(L, V) for V in geom.point_lines[x] if V != L]
    else:
        ls = geom.point_lines[int(obj)]
        pairs = [(U, V) for U in ls for V in ls if U != V]
    total = 0
    for U, V in pairs:
        if not geom.concurrent[U, V] or U == V:
            raise ValueError("pair of distinct concurrent lines needed")
        ok, bad, n = _property_g_pair(geom, int(U), int(V))
        total += n
        if not ok:
            return {"verdict": False, "pair": [int(U), int(V)], "triad": bad, "triads_checked": total}
    return {"verdict": True, "pairs": len(pairs), "triads_checked": total}


# ---------------------------------------------------------------- duality


def dualize(geom: PointLineGeometry) -> PointLineGeometry:
    D = PointLineGeometry(
        geom.n_lines,
        [geom.point_lines[p] for p in range(geom.n_points)],
        name=f"dual of {geom.name}" if geom.name else "dual",
        point_labels=geom.line_labels,
        line_labels=geom.point_labels,
    )
    if geom.order is not None:
        D.order = (geom.order[1], geom.order[0])
    return D


# ---------------------------------------------------------------- isomorphism


def iso_search(A1: np.ndarray, A2: np.ndarray, seed: dict | None = None, cand0: np.ndarray | None = None):
    """Yield adjacency-preserving bijections V1 -> V2 (as index arrays).

    Candidate sets are refined on every assignment; the next vertex is the
    one with fewest candidates (smallest index on ties), and candidates are
    tried in increasing order.  Forced assignments do not branch.
    """
    n = len(A1)
    if len(A2) != n:
        return
    cand = np.ones((n, n), dtype=bool) if cand0 is None else cand0.copy()
    mapping = np.full(n, -1, dtype=np.int64)

    def assign(cand, mapping, v, w):
        mapping[v] = w
        cand &= A1[v][:, None] == A2[w][None, :]
        cand[v, :] = False
        cand[:, w] = False

    if seed:
        for v, w in seed.items():
            if not cand[v, w]:
                return
            assign(cand, mapping, v, w)

    def rec(cand, mapping):
        while True:
            free = np.nonzero(mapping < 0)[0]
            if len(free) == 0:
                yield mapping.copy()
                return
            counts = cand[free].sum(axis=1)
            i = int(np.argmin(counts))
            v = int(free[i])
            if counts[i] == 0:
                return
            if counts[i] > 1:
                break
            w = int(np.nonzero(cand[v])[0][0])
            assign(cand, mapping, v, w)
        for w in np.nonzero(cand[v])[0]:
            c2, m2 = cand.copy(), mapping.copy()
            assign(c2, m2, v, int(w))
            yield from rec(c2, m2)

    yield from rec(cand, mapping)


@dataclass
class GeomIso:
    verdict: bool | None
    point_map: np.ndarray | None = None
    line_map: np.ndarray | None = None
    invariant: str | None = None

    def __bool__(self) -> bool:
        return bool(self.verdict)


def _point_invariants(geom: PointLineGeometry) -> np.ndarray:
    s, t = geom.order
    out = np.zeros(geom.n_points, dtype=np.int64)
    for p in range(geom.n_points):
        _, sp = _span_sizes_from(geom, p)
        out[p] = int((sp == t + 1).sum())
    return out


def line_map_from_points(g1: PointLineGeometry, g2: PointLineGeometry, pmap: np.ndarray):
    idx = g2.line_index()
    lmap = np.full(g1.n_lines, -1, dtype=np.int64)
    for j, L in enumerate(g1.lines):
        k = idx.get(np.sort(pmap[L]).tobytes(), -1)
        if k < 0:
            return None
        lmap[j] = k
    return lmap


def gq_isomorphic(g1: PointLineGeometry, g2: PointLineGeometry) -> GeomIso:
    if g1.n_points > 500 or g2.n_points > 500:
        raise ValueError("isomorphism search is capped at 500 points")
    o1, o2 = _order(g1), _order(g2)
    if o1 != o2:
        return GeomIso(False, invariant=f"orders {o1} vs {o2}")
    if (g1.n_points, g1.n_lines) != (g2.n_points, g2.n_lines):
        return GeomIso(False, invariant="sizes differ")
    i1, i2 = _point_invariants(g1), _point_invariants(g2)
    if sorted(i1) != sorted(i2):
        return GeomIso(False, invariant=f"regular-pair counts {sorted(set(i1))} vs {sorted(set(i2))}")
    d1, d2 = span_size_distribution(g1), span_size_distribution(g2)
    if d1 != d2:
        return GeomIso(False, invariant=f"span-size distribution {d1} vs {d2}")
    cand0 = i1[:, None] == i2[None, :]
    for pmap in iso_search(g1.collinear, g2.collinear, cand0=cand0):
        lmap = line_map_from_points(g1, g2, pmap)
        if lmap is not None and (g2.inc[np.ix_(pmap, lmap)] == g1.inc).all():
            return GeomIso(True, pmap, lmap)
    return GeomIso(False, invariant="exhaustive search found no isomorphism")


# ---------------------------------------------------------------- automorphisms


class GeometryAutomorphism:
    """Point and line permutations; ``a * b`` applies b first."""

    __slots__ = ("points", "lines", "name")

    def __init__(self, points, lines, name: str = ""):
        self.points = np.asarray(points, dtype=np.int64)
        self.lines = np.asarray(lines, dtype=np.int64)
        self.name = name

    def __mul__(self, other: "GeometryAutomorphism") -> "GeometryAutomorphism":
        return GeometryAutomorphism(self.points[other.points], self.lines[other.lines])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeometryAutomorphism)
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.lines, other.lines)
        )

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"GeometryAutomorphism({self.name or ''} moves {int((self.points != np.arange(len(self.points))).sum())} points)"

    @property
    def key(self) -> bytes:
        return self.points.tobytes() + b"|" + self.lines.tobytes()

    def inverse(self) -> "GeometryAutomorphism":
        return GeometryAutomorphism(np.argsort(self.points), np.argsort(self.lines))

    def is_identity(self) -> bool:
        return bool((self.points == np.arange(len(self.points))).all() and (self.lines == np.arange(len(self.lines))).all())

    def fixed_points(self) -> np.ndarray:
        return np.nonzero(self.points == np.arange(len(self.points)))[0]

    def fixed_lines(self) -> np.ndarray:
        return np.nonzero(self.lines == np.arange(len(self.lines)))[0]

    def order(self) -> int:
        k, cur = 1, self
        while not cur.is_identity():
            cur = cur * self
            k += 1
        return k

    def preserves(self, geom: PointLineGeometry) -> bool:
        """p I L iff p^theta I L^theta, for every pair."""
        if len(self.points) != geom.n_points or len(self.lines) != geom.n_lines:
            return False
        return geom.is_automorphism(self.points, self.lines)

    @classmethod
    def identity(cls, geom: PointLineGeometry) -> "GeometryAutomorphism":
        return cls(np.arange(geom.n_points), np.arange(geom.n_lines), "id")

    @classmethod
    def from_points(cls, geom: PointLineGeometry, pmap) -> "GeometryAutomorphism":
        lmap = line_map_from_points(geom, geom, np.asarray(pmap, dtype=np.int64))
        if lmap is None:
            raise ValueError("point map does not send lines to lines")
        return cls(pmap, lmap)


def closure_of(gens: Sequence[GeometryAutomorphism]) -> list[GeometryAutomorphism]:
    """The group generated by the given automorphisms, identity first."""
    if not gens:
        return []
    n, m = len(gens[0].points), len(gens[0].lines)
    ident = GeometryAutomorphism(np.arange(n), np.arange(m), "id")
    out = [ident]
    seen = {ident.key}
    i = 0
    while i < len(out):
        for g in gens:
            h = out[i] * g
            if h.key not in seen:
                seen.add(h.key)
                out.append(h)
        i += 1
    return out


def is_closed(action: Sequence[GeometryAutomorphism]) -> tuple | None:
    """None when closed under composition, else an offending index pair."""
    keys = {a.key for a in action}
    for i, a in enumerate(action):
        for j, b in enumerate(action):
            if (a * b).key not in keys:
                return (i, j)
    return None


def automorphisms_fixing(geom: PointLineGeometry, fixed_points: Iterable[int], limit: int | None = None):
    """Yield automorphisms fixing the given points (collinearity search)."""
    seed = {int(p): int(p) for p in fixed_points}
    n = 0
    for pmap in iso_search(geom.collinear, geom.collinear, seed=seed):
        lmap = line_map_from_points(geom, geom, pmap)
        if lmap is None:
            continue
        yield GeometryAutomorphism(pmap, lmap)
        n += 1
        if limit is not None and n >= limit:
            return
