"""Integer-coefficient univariate polynomials.

Coefficients are stored constant-term first.  Heavy ring operations
(factorisation, gcd, resultants) are delegated to sympy's ZZ polynomial
domain; everything here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

import sympy
from sympy import ZZ

from .intervals import BoxIv, Dyadic, RIv

_x = sympy.Symbol("x")


class IntPolynomial:
    """Univariate polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("IntPolynomial is immutable")

    # -- basic queries ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, o):
        return isinstance(o, IntPolynomial) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "IntPolynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return "IntPolynomial(" + " + ".join(terms) + ")"

    # -- ring operations ---------------------------------------------------

    def __add__(self, o: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(o.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(o.coeffs):
            a[i] += c
        return IntPolynomial(a)

    def __sub__(self, o: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(o.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(o.coeffs):
            a[i] -= c
        return IntPolynomial(a)

    def __mul__(self, o: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero or o.is_zero:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def scale(self, k: int) -> "IntPolynomial":
        return IntPolynomial(tuple(k * c for c in self.coeffs))

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def primitive(self) -> "IntPolynomial":
        """Content 1, positive leading coefficient."""
        if self.is_zero:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def reverse(self) -> "IntPolynomial":
        """x^deg * p(1/x); used for inverses of algebraic numbers."""
        return IntPolynomial(tuple(reversed(self.coeffs)))

    def compose_power(self, ell: int) -> "IntPolynomial":
        """p(x^ell)."""
        out = [0] * (self.degree * ell + 1) if not self.is_zero else []
        for i, c in enumerate(self.coeffs):
            out[i * ell] = c
        return IntPolynomial(out)

    # -- evaluation ----------------------------------------------------------

    def eval_fraction(self, x: Fraction) -> Fraction:
        r = Fraction(0)
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def eval_int(self, x: int) -> int:
        r = 0
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def eval_riv(self, x: RIv) -> RIv:
        r = RIv.point(0)
        for c in reversed(self.coeffs):
            r = r * x + RIv.point(Dyadic(c))
        return r

    def eval_box(self, z: BoxIv, prec: int = 0) -> BoxIv:
        r = BoxIv.point(0)
        for c in reversed(self.coeffs):
            r = r * z + BoxIv.point(Dyadic(c))
            if prec:
                r = r.rounded(prec)
        return r

    # -- sympy bridge ----------------------------------------------------

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)), _x, domain=ZZ)

    @staticmethod
    def from_sympy(p) -> "IntPolynomial":
        return IntPolynomial(tuple(int(c) for c in reversed(p.all_coeffs())))

    # -- structure ---------------------------------------------------------

    def gcd(self, o: "IntPolynomial") -> "IntPolynomial":
        return _gcd_cached(self.coeffs, o.coeffs)

    def squarefree_part(self) -> "IntPolynomial":
        """p / gcd(p, p'), primitive."""
        if self.degree <= 1:
            return self.primitive()
        g = self.gcd(self.derivative())
        if g.degree == 0:
            return self.primitive()
        q, r = _divmod_exact(self, g)
        assert r.is_zero
        return q.primitive()

    def is_squarefree(self) -> bool:
        if self.degree <= 1:
            return True
        return self.gcd(self.derivative()).degree == 0

    def factor_irreducible(self) -> list[tuple["IntPolynomial", int]]:
        """Irreducible factors over Z with multiplicities (content dropped)."""
        return _factor_cached(self.coeffs)

    def resultant_with(self, other: "IntPolynomial") -> int:
        a = self.to_sympy()
        b = other.to_sympy()
        return int(sympy.resultant(a, b))


def _divmod_exact(a: IntPolynomial, b: IntPolynomial):
    """Division over Q, with exact results converted back; raises if the
    quotient or remainder is not integral."""
    q, r = sympy.div(a.to_sympy(), b.to_sympy(), domain="QQ")
    qi = sympy.Poly(q, _x)
    ri = sympy.Poly(r, _x)
    return (IntPolynomial([int(c) for c in reversed(qi.all_coeffs())]),
            IntPolynomial([int(c) for c in reversed(ri.all_coeffs())]))


@lru_cache(maxsize=4096)
def _gcd_cached(a: tuple, b: tuple) -> IntPolynomial:
    pa = IntPolynomial(a).to_sympy()
    pb = IntPolynomial(b).to_sympy()
    return IntPolynomial.from_sympy(sympy.gcd(pa, pb).as_poly(_x))


@lru_cache(maxsize=4096)
def _factor_cached(coeffs: tuple) -> list:
    p = IntPolynomial(coeffs).to_sympy()
    _, factors = sympy.factor_list(p)
    out = []
    for f, mult in factors:
        fp = IntPolynomial.from_sympy(f.as_poly(_x)).primitive()
        if fp.degree >= 1:
            out.append((fp, int(mult)))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return out


def poly_from_roots_monic(roots: Sequence[Fraction]) -> IntPolynomial:
    """Monic product of (x - r) for integer roots; helper for tests."""
    p = IntPolynomial((1,))
    for r in roots:
        assert r.denominator == 1
        p = p * IntPolynomial((-r.numerator, 1))
    return p


# ---------------------------------------------------------------------------
# Mignotte root-separation bound
# ---------------------------------------------------------------------------


def separation_bound(p: IntPolynomial) -> Fraction:
    """Positive rational lower bound on distances between distinct roots.

    Uses the classical bound sqrt(6) / (d^((d+1)/2) * H^(d-1)) where d is the
    degree and H the height; the returned rational slightly underestimates
    the irrational value, preserving the guarantee.
    """
    d = p.degree
    if d < 2:
        raise ValueError("no pair of roots")
    H = max(p.height, 1)
    # bound^2 = 6 / (d^(d+1) * H^(2d-2)); rational lower bound of the sqrt
    denom = d ** (d + 1) * H ** (2 * d - 2)
    val = Fraction(6, denom)
    bits = max(128, denom.bit_length() // 2 + 16)
    lo = isqrt((val.numerator << (2 * bits)) // val.denominator)
    result = Fraction(lo, 1 << bits)
    assert result > 0 and result * result <= val
    return result
