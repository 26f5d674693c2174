"""Coordinate models: the symplectic quadrangle W(q) and the Hermitian H(3,q^2)."""
from __future__ import annotations

import itertools

import numpy as np

from .ff import FiniteField, conjugation_map, field_build, field_of_order
from .gq import PointLineGeometry, verify_gq

__all__ = ["projective_points", "normalize", "build_w", "build_h3", "symplectic_form", "hermitian_form"]


def normalize(F: FiniteField, v: np.ndarray) -> np.ndarray:
    """Scale rows so that the first nonzero coordinate is 1."""
    v = np.asarray(v, dtype=np.int64)
    nz = v != 0
    first = np.argmax(nz, axis=-1)
    lead = np.take_along_axis(v, first[..., None], axis=-1)
    return F.mul[F.inv[lead], v]


def projective_points(F: FiniteField, dim: int) -> np.ndarray:
    """All normalized points of PG(dim-1, q), sorted lexicographically."""
    pts = [v for v in itertools.product(range(F.q), repeat=dim) if any(v)]
    pts = [v for v in pts if v[next(i for i in range(dim) if v[i])] == 1]
    return np.array(sorted(pts), dtype=np.int64)


def _encode(q: int, v: np.ndarray) -> np.ndarray:
    return np.asarray(v, dtype=np.int64) @ (q ** np.arange(v.shape[-1] - 1, -1, -1))


def symplectic_form(F: FiniteField, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """X0Y3 + X1Y2 - X2Y1 - X3Y0 (broadcasting)."""
    a, m, s = F.add, F.mul, F.sub
    t1 = a[m[x[..., 0], y[..., 3]], m[x[..., 1], y[..., 2]]]
    t2 = a[m[x[..., 2], y[..., 1]], m[x[..., 3], y[..., 0]]]
    return s[t1, t2]


def hermitian_form(F: FiniteField, conj: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """sum_i x_i y_i^q; on x = y this is sum_i x_i^(q+1)."""
    out = np.zeros(np.broadcast_shapes(x.shape[:-1], y.shape[:-1]), dtype=np.int64)
    for i in range(x.shape[-1]):
        out = F.add[out, F.mul[x[..., i], conj[y[..., i]]]]
    return out


def _lines_from_pairs(F: FiniteField, pts: np.ndarray, orth: np.ndarray, keep=None) -> list[list[int]]:
    """Lines spanned by orthogonal point pairs, each found once."""
    q = F.q
    index = {int(k): i for i, k in enumerate(_encode(q, pts))}
    n = len(pts)
    covered = np.eye(n, dtype=bool)
    lines = []
    lam = np.arange(q, dtype=np.int64)
    for p in range(n):
        for r in np.nonzero(orth[p] & ~covered[p])[0]:
            if covered[p, r]:
                continue
            # points p + lam r, and r
            vecs = F.add[pts[p][None, :], F.mul[lam[:, None], pts[r][None, :]]]
            vecs = normalize(F, vecs)
            members = sorted({index[int(k)] for k in _encode(q, vecs)} | {int(r)})
            if keep is not None and not keep[members].all():
                continue
            covered[np.ix_(members, members)] = True
            lines.append(members)
    lines.sort()
    return lines


def build_w(q: int) -> PointLineGeometry:
    """W(q): all points of PG(3,q), totally isotropic lines of the
    symplectic form X0Y3 + X1Y2 - X2Y1 - X3Y0."""
    if not 2 <= q <= 5:
        raise ValueError("build_w needs q <= 5")
    F = field_of_order(q)
    pts = projective_points(F, 4)
    orth = symplectic_form(F, pts[:, None, :], pts[None, :, :]) == 0
    lines = _lines_from_pairs(F, pts, orth)
    g = PointLineGeometry(len(pts), lines, name=f"W({q})", point_labels=[tuple(int(c) for c in v) for v in pts])
    g.field = F
    g.coords = pts
    v = verify_gq(g)
    if not v:
        raise RuntimeError(f"W({q}) failed {v.axiom}")
    return g


def build_h3(q: int) -> PointLineGeometry:
    """H(3,q^2): points of X0^(q+1)+...+X3^(q+1) = 0 in PG(3,q^2) and the
    lines contained in it."""
    if q not in (2, 3):
        raise ValueError("build_h3 needs q in {2, 3}")
    p = 2 if q == 2 else 3
    F = field_build(p, 2)
    conj = conjugation_map(F).table
    allp = projective_points(F, 4)
    on = hermitian_form(F, conj, allp, allp) == 0
    pts = allp[on]
    orth = hermitian_form(F, conj, pts[:, None, :], pts[None, :, :]) == 0
    # a line through two conjugate points of the variety lies on it
    lines = _lines_from_pairs(F, pts, orth)
    g = PointLineGeometry(len(pts), lines, name=f"H(3,{q * q})", point_labels=[tuple(int(c) for c in v) for v in pts])
    g.field = F
    g.coords = pts
    v = verify_gq(g)
    if not v:
        raise RuntimeError(f"H(3,{q * q}) failed {v.axiom}")
    return g
