"""Independent reference computations used to freeze expected values.

Nothing here imports the package: fields are polynomial arithmetic, groups
are explicit matrices or tuples, geometries are sets of frozensets.
"""
from __future__ import annotations

import itertools


# ---------------------------------------------------------------- fields


def _poly_mulmod(a, b, mod, p):
    e = len(mod) - 1
    prod = [0] * (2 * e)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e + 1):
                prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
    return prod[:e]


def digits(i, p, e):
    return [(i // p**k) % p for k in range(e)]


def undigits(d, p):
    return sum(v * p**k for k, v in enumerate(d))


def smallest_irreducible(p, e):
    """Lexicographically smallest monic irreducible, coefficients low-first
    read as base-p digits; irreducibility by trial division."""
    if e == 1:
        return [0, 1]
    for n in range(p**e):
        f = digits(n, p, e) + [1]
        if _irreducible(f, p):
            return f
    raise AssertionError("no irreducible found")


def _irreducible(f, p):
    e = len(f) - 1
    for d in range(1, e // 2 + 1):
        for n in range(p**d):
            g = digits(n, p, d) + [1]
            if _divides(g, f, p):
                return False
    return True


def _divides(g, f, p):
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] * inv % p
        if c:
            for i in range(dg + 1):
                r[k - dg + i] = (r[k - dg + i] - c * g[i]) % p
    return not any(r[:dg])


class Field:
    """GF(p^e) on indices, arithmetic by polynomials."""

    def __init__(self, p, e):
        self.p, self.e, self.q = p, e, p**e
        self.mod = smallest_irreducible(p, e)

    def add(self, a, b):
        p, e = self.p, self.e
        return undigits([(x + y) % p for x, y in zip(digits(a, p, e), digits(b, p, e))], p)

    def neg(self, a):
        p, e = self.p, self.e
        return undigits([(-x) % p for x in digits(a, p, e)], p)

    def mul(self, a, b):
        p, e = self.p, self.e
        if e == 1:
            return a * b % p
        return undigits(_poly_mulmod(digits(a, p, e), digits(b, p, e), self.mod, p), p)

    def pow(self, a, k):
        r = 1
        for _ in range(k):
            r = self.mul(r, a)
        return r


# ---------------------------------------------------------------- groups


def heis1_matrix(q_prime, a, c, b):
    """(a,c,b) as the unitriangular 3x3 matrix over F_p."""
    return ((1, a, c), (0, 1, b), (0, 0, 1))


def matmul(A, B, add, mul, zero=0):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = zero
            for k in range(n):
                s = add(s, mul(A[i][k], B[k][j]))
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def closure(elements, mul, identity):
    out = {identity} | set(elements)
    frontier = list(out)
    while frontier:
        new = []
        for a in frontier:
            for b in list(out):
                for c in (mul(a, b), mul(b, a)):
                    if c not in out:
                        out.add(c)
                        new.append(c)
        frontier = new
    return frozenset(out)


def heis1_elements(p):
    return [(a, c, b) for a in range(p) for c in range(p) for b in range(p)]


def heis1_mul(p):
    return lambda x, y: ((x[0] + y[0]) % p, (x[1] + y[1] + x[0] * y[2]) % p, (x[2] + y[2]) % p)


def abelian_subgroups_of_order_heis1(p, m):
    """All abelian subgroups of order m in H_1(p), p prime, by closing
    pairs of commuting elements (every such subgroup is 2-generated)."""
    mul = heis1_mul(p)
    els = heis1_elements(p)
    idn = (0, 0, 0)
    found = set()
    for x, y in itertools.combinations_with_replacement(els, 2):
        if mul(x, y) != mul(y, x):
            continue
        H = closure([x, y], mul, idn)
        if len(H) == m:
            found.add(H)
    return found


# ---------------------------------------------------------------- geometries


def w_oracle(p):
    """W(p), p prime: points of PG(3,p), lines the totally isotropic lines
    of x0y3 + x1y2 - x2y1 - x3y0."""
    pts = []
    for v in itertools.product(range(p), repeat=4):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            pts.append(v)

    def form(x, y):
        return (x[0] * y[3] + x[1] * y[2] - x[2] * y[1] - x[3] * y[0]) % p

    def norm(v):
        v = [c % p for c in v]
        lead = next(c for c in v if c)
        inv = pow(lead, -1, p)
        return tuple(c * inv % p for c in v)

    lines = set()
    for x, y in itertools.combinations(pts, 2):
        if form(x, y):
            continue
        L = frozenset(norm([a * x[i] + b * y[i] for i in range(4)]) for a in range(p) for b in range(p) if a or b)
        lines.add(L)
    return pts, [sorted(L) for L in lines]


def gq_order(points, lines):
    """(s, t) if the incidence structure is a thick GQ, else None (sets only)."""
    lines = [frozenset(L) for L in lines]
    sizes = {len(L) for L in lines}
    on = {p: [L for L in lines if p in L] for p in points}
    degs = {len(v) for v in on.values()}
    if len(sizes) != 1 or len(degs) != 1:
        return None
    s, t = sizes.pop() - 1, degs.pop() - 1
    for p in points:
        for L in lines:
            if p in L:
                continue
            # exactly one point of L collinear with p
            k = sum(1 for u in L if any(u in M for M in on[p]))
            if k != 1:
                return None
    if s < 2 or t < 2:
        return None
    return s, t


def kantor_axioms(G_elements, mul, F, Fstar, s, t):
    """(a)-(d) on explicit element sets."""
    if len(G_elements) != s * s * t or len(F) != t + 1 or len(Fstar) != t + 1:
        return False
    ident = next(g for g in G_elements if all(mul(g, h) == h for h in G_elements))
    if any(len(A) != s for A in F) or any(len(A) != s * t for A in Fstar):
        return False
    if any(not A <= As for A, As in zip(F, Fstar)):
        return False
    for A, B, C in itertools.permutations(range(len(F)), 3):
        AB = {mul(a, b) for a in F[A] for b in F[B]}
        if AB & F[C] != {ident}:
            return False
    for A, B in itertools.permutations(range(len(F)), 2):
        if F[A] & Fstar[B] != {ident}:
            return False
    return True


def collinearity_graph_counts(points, lines):
    """Numbers of points, lines, and collinear ordered pairs."""
    lines = [set(L) for L in lines]
    col = sum(len(L) * (len(L) - 1) for L in lines)
    return len(points), len(lines), col
