"""Finite fields GF(p^e) as dense arithmetic tables.

Elements are the integers 0..q-1.  An element with index ``i`` is the
polynomial whose coefficients (low degree first) are the base-p digits of
``i``, reduced modulo a fixed monic irreducible.  Index 0 is zero and
index 1 is one.
"""
from __future__ import annotations

import itertools

import numpy as np

__all__ = [
    "FiniteField",
    "FieldAutomorphism",
    "field_build",
    "tits_endomorphism",
    "conjugation_map",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _digits(i: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(i % p)
        i //= p
    return out


def _poly_has_factor(coeffs: list[int], p: int) -> bool:
    # coeffs: monic polynomial, low degree first. Trial division by every
    # monic polynomial of degree 1..deg/2.
    deg = len(coeffs) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            div = list(low) + [1]
            rem = list(coeffs)
            for k in range(deg - d, -1, -1):
                c = rem[k + d]
                if c:
                    for j in range(d + 1):
                        rem[k + j] = (rem[k + j] - c * div[j]) % p
            if not any(rem[:d]):
                return True
    return False


class FiniteField:
    """GF(p^e) with add/mul/neg/inv tables indexed by element."""

    def __init__(self, p: int, e: int, modulus: list[int]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = list(modulus)
        q = self.q
        vecs = np.array([_digits(i, p, e) for i in range(q)], dtype=np.int64)
        weights = p ** np.arange(e, dtype=np.int64)
        self.add = ((vecs[:, None, :] + vecs[None, :, :]) % p) @ weights
        self.neg = ((-vecs) % p) @ weights
        self.sub = self.add[np.arange(q)[:, None], self.neg[None, :]]
        # multiplication by x as a matrix on coefficient vectors
        shift = np.zeros((e, e), dtype=np.int64)
        for k in range(e - 1):
            shift[k + 1, k] = 1
        for k in range(e):
            shift[k, e - 1] = (-modulus[k]) % p
        powers = [np.eye(e, dtype=np.int64)]
        for _ in range(e - 1):
            powers.append((shift @ powers[-1]) % p)
        # column j of mult(a) is a * x^j
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            ma = sum(vecs[a, j] * powers[j] for j in range(e)) % p
            mul[a] = ((vecs @ ma.T) % p) @ weights
        self.mul = mul
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            hits = np.nonzero(mul[a] == 1)[0]
            if len(hits) != 1:
                raise ValueError("modulus is not irreducible")
            inv[a] = hits[0]
        self.inv = inv
        # powers table pow[a, k] for 0 <= k < q
        pw = np.zeros((q, q), dtype=np.int64)
        pw[:, 0] = 1
        for k in range(1, q):
            pw[:, k] = mul[np.arange(q), pw[:, k - 1]]
        self._pow = pw

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.e, self.modulus) == (
            other.p,
            other.e,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, tuple(self.modulus)))

    @property
    def elements(self) -> range:
        return range(self.q)

    def power(self, a, k: int):
        """a**k for an element or index array; k >= 0."""
        if k == 0:
            return np.ones_like(a) if isinstance(a, np.ndarray) else 1
        # a^(q-1) = 1 for a != 0
        kk = (k - 1) % (self.q - 1) + 1
        return self._pow[a, kk]

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def half(self) -> int:
        if self.p == 2:
            raise ValueError("2 is not invertible in characteristic 2")
        return int(self.inv[2 % self.p])

    def frobenius(self, k: int) -> "FieldAutomorphism":
        return FieldAutomorphism(self, k % self.e if self.e else 0)


class FieldAutomorphism:
    """x -> x^(p^k)."""

    def __init__(self, field: FiniteField, k: int):
        self.field = field
        self.k = k
        self.table = field.power(np.arange(field.q), field.p**k) if k else np.arange(field.q)
        self.table[0] = 0

    def __call__(self, a):
        return self.table[a]

    def __repr__(self) -> str:
        return f"x -> x^({self.field.p}^{self.k}) on {self.field!r}"

    def fixed_elements(self) -> list[int]:
        return [int(a) for a in np.nonzero(self.table == np.arange(self.field.q))[0]]


_CACHE: dict[tuple[int, int], FiniteField] = {}


def field_build(p: int, e: int) -> FiniteField:
    """GF(p^e) under the smallest monic irreducible modulus.

    Candidates are ordered by the integer whose base-p digits are the
    non-leading coefficients, lowest degree first.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 1 <= e <= 6:
        raise ValueError(f"degree {e} out of range 1..6")
    if p**e > 4096:
        raise ValueError(f"field order {p**e} exceeds 4096")
    key = (p, e)
    if key not in _CACHE:
        for n in range(p**e):
            coeffs = _digits(n, p, e) + [1]
            if e == 1 or (coeffs[0] != 0 and not _poly_has_factor(coeffs, p)):
                _CACHE[key] = FiniteField(p, e, coeffs)
                break
    return _CACHE[key]


def field_of_order(q: int) -> FiniteField:
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1 or not is_prime(p):
                break
            return field_build(p, e)
    raise ValueError(f"{q} is not a prime power")


def tits_endomorphism(F: FiniteField) -> FieldAutomorphism:
    """sigma with sigma(sigma(x)) = x^2, for q an odd power of 2."""
    if F.p != 2 or F.e % 2 == 0:
        raise ValueError("Tits endomorphism needs q = 2^e with e odd")
    k = next(k for k in range(F.e) if (2 * k - 1) % F.e == 0)
    return FieldAutomorphism(F, k)


def conjugation_map(F: FiniteField) -> FieldAutomorphism:
    """The involution x -> x^sqrt(q) of GF(q) for square q."""
    if F.e % 2:
        raise ValueError("conjugation needs a field of square order")
    return FieldAutomorphism(F, F.e // 2)
