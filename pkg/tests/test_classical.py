import itertools

import numpy as np
import pytest

from oracles import Field, gq_order
from stgq.classical import build_h3, build_w, normalize, projective_points, symplectic_form
from stgq.ff import field_build
from stgq.gq import gq_isomorphic, verify_gq


def h3_oracle():
    """H(3,4) from the form sum x_i y_i^2 over GF(4), by polynomial arithmetic."""
    F = Field(2, 2)
    conj = lambda a: F.mul(a, a)

    def form(x, y):
        s = 0
        for u, v in zip(x, y):
            s = F.add(s, F.mul(u, conj(v)))
        return s

    def norm(v):
        lead = next(c for c in v if c)
        inv = next(b for b in range(1, 4) if F.mul(lead, b) == 1)
        return tuple(F.mul(c, inv) for c in v)

    pts = sorted({norm(v) for v in itertools.product(range(4), repeat=4) if any(v) and form(v, v) == 0})
    lines = set()
    for x, y in itertools.combinations(pts, 2):
        if form(x, y):
            continue
        L = set()
        for a in range(4):
            for b in range(4):
                if a or b:
                    L.add(norm(tuple(F.add(F.mul(a, x[i]), F.mul(b, y[i])) for i in range(4))))
        if all(form(u, u) == 0 for u in L) and all(form(u, v) == 0 for u in L for v in L):
            lines.add(frozenset(L))
    return pts, [sorted(L) for L in lines]


def test_h3_matches_oracle(h34):
    pts, lines = h3_oracle()
    assert len(pts) == 45 and len(lines) == 27
    assert gq_order(pts, lines) == (4, 2)
    v = verify_gq(h34)
    assert v.ok and v.order == (4, 2)

    def norm(v):
        F = Field(2, 2)
        lead = next(c for c in v if c)
        inv = next(b for b in range(1, 4) if F.mul(lead, b) == 1)
        return tuple(F.mul(c, inv) for c in v)

    A = {frozenset(norm(tuple(h34.point_labels[p])) for p in L) for L in h34.lines}
    assert A == {frozenset(L) for L in lines}


def test_h3_q3_counts():
    g = build_h3(3)
    # order (9, 3): (s+1)(st+1) points, (t+1)(st+1) lines
    assert (g.n_points, g.n_lines) == (280, 112)
    assert verify_gq(g).order == (9, 3)


@pytest.mark.parametrize("q", [6, 1, 10])
def test_w_rejects(q):
    with pytest.raises(ValueError):
        build_w(q)


def test_projective_points_normalized():
    F = field_build(3, 1)
    P = projective_points(F, 4)
    assert len(P) == 40
    for v in P:
        assert (normalize(F, v) == v).all()
    assert len({tuple(v) for v in P}) == 40


def test_symplectic_form_alternating():
    F = field_build(5, 1)
    rng = np.random.default_rng(0)
    x = rng.integers(0, 5, (50, 4))
    y = rng.integers(0, 5, (50, 4))
    assert (symplectic_form(F, x, x) == 0).all()
    a, b = symplectic_form(F, x, y), symplectic_form(F, y, x)
    assert ((a + b) % 5 == 0).all()


def test_w4_prime_power():
    g = build_w(4)
    assert (g.n_points, g.n_lines) == (85, 85)
    assert verify_gq(g).order == (4, 4)


def test_w2_small():
    g = build_w(2)
    assert (g.n_points, g.n_lines) == (15, 15)
    assert gq_isomorphic(g, build_w(2)).verdict is True
