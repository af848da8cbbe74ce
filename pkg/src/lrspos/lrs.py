"""Integer linear recurrence sequences.

A sequence of order k is given by recurrence coefficients (b_1, ..., b_k),
b_k != 0, and initial terms (u_0, ..., u_{k-1}):

    u_{n+k} = b_1 u_{n+k-1} + ... + b_k u_n.

The order is the length of the given recurrence; no minimisation is
attempted.  Everything here is exact big-integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterator, Optional, Sequence

import sympy

from .algebraic import AlgebraicNumber, NumberFieldElement, is_root_of_unity
from .intervals import RIv, atan2_iv, pi_iv
from .polynomials import IntPolynomial

_x = sympy.Symbol("x")
_y = sympy.Symbol("y")


@dataclass(frozen=True)
class Lrs:
    """An integer LRS: recurrence coefficients b_1..b_k and u_0..u_{k-1}."""

    recurrence: tuple
    initial: tuple

    def __post_init__(self):
        object.__setattr__(self, "recurrence",
                           tuple(int(b) for b in self.recurrence))
        object.__setattr__(self, "initial",
                           tuple(int(u) for u in self.initial))
        if len(self.recurrence) != len(self.initial):
            raise ValueError("recurrence and initial lengths differ")
        if not self.recurrence:
            raise ValueError("order must be at least 1")
        if self.recurrence[-1] == 0:
            raise ValueError("zero trailing coefficient")

    @property
    def order(self) -> int:
        return len(self.recurrence)

    def __repr__(self):
        return f"Lrs(b={list(self.recurrence)}, u={list(self.initial)})"


@dataclass(frozen=True)
class CompanionSystem:
    """Matrix form: u_n = v^T M^n w with M the companion transpose."""

    M: tuple  # rows, each a tuple of ints
    v: tuple
    w: tuple


def char_poly(s: Lrs) -> IntPolynomial:
    """x^k - b_1 x^(k-1) - ... - b_k, constant term first."""
    k = s.order
    coeffs = [0] * (k + 1)
    coeffs[k] = 1
    for i, b in enumerate(s.recurrence):
        coeffs[k - 1 - i] = -b
    return IntPolynomial(coeffs)


def is_simple(s: Lrs) -> bool:
    """True when the characteristic polynomial has no repeated roots."""
    return char_poly(s).is_squarefree()


def term_iter(s: Lrs) -> Iterator[int]:
    """All terms in order, linear iteration."""
    window = list(s.initial)
    k = s.order
    for u in window:
        yield u
    rev = tuple(reversed(s.recurrence))  # rev[i] multiplies window[i]
    while True:
        nxt = 0
        for b, u in zip(rev, window):
            nxt += b * u
        yield nxt
        window.pop(0)
        window.append(nxt)


def term_at(s: Lrs, n: int) -> int:
    """Exact u_n by linear iteration."""
    if n < 0:
        raise ValueError("negative index")
    k = s.order
    if n < k:
        return s.initial[n]
    window = list(s.initial)
    rev = tuple(reversed(s.recurrence))
    for _ in range(n - k + 1):
        nxt = 0
        for b, u in zip(rev, window):
            nxt += b * u
        window.pop(0)
        window.append(nxt)
    return window[-1]


def companion_system(s: Lrs) -> CompanionSystem:
    """The transpose-companion matrix form of the sequence."""
    k = s.order
    M = [[0] * k for _ in range(k)]
    for j in range(k):
        M[j][0] = s.recurrence[j]
    for i in range(k - 1):
        M[i][i + 1] = 1
    v = tuple(reversed(s.initial))
    w = tuple(0 for _ in range(k - 1)) + (1,)
    return CompanionSystem(tuple(tuple(r) for r in M), v, w)


def _mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]):
    n = len(A)
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt)
                 for row in A)


def _mat_vec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def term_at_pow(s: Lrs, n: int) -> int:
    """Exact u_n = v^T M^n w via binary exponentiation of the companion."""
    if n < 0:
        raise ValueError("negative index")
    sys_ = companion_system(s)
    k = s.order
    # accumulate M^n w as a vector, squaring the matrix
    vec = list(sys_.w)
    base = [list(r) for r in sys_.M]
    e = n
    while e:
        if e & 1:
            vec = list(_mat_vec(base, vec))
        e >>= 1
        if e:
            base = [list(r) for r in _mat_mul(base, base)]
    return sum(a * b for a, b in zip(sys_.v, vec))


def _charpoly_matrix(M: Sequence[Sequence[int]]) -> IntPolynomial:
    sm = sympy.Matrix([[int(x) for x in row] for row in M])
    cp = sm.charpoly(_x)
    return IntPolynomial([int(c) for c in reversed(cp.all_coeffs())])


def from_matrix(M: Sequence[Sequence[int]], v: Sequence[int],
                w: Sequence[int]) -> Lrs:
    """An Lrs whose terms equal v^T M^n w from index dim(M) onward.

    When det(M) != 0 the agreement holds from index 0.  Singular M is
    handled by stripping zero eigenvalues; if the surviving recurrence
    cannot reproduce the integer sequence without an index shift, a
    ValueError explains why.
    """
    k = len(M)
    if any(len(row) != k for row in M) or len(v) != k or len(w) != k:
        raise ValueError("dimension mismatch")
    v = tuple(int(x) for x in v)
    w = tuple(int(x) for x in w)

    def u(n: int) -> int:
        vec = list(w)
        for _ in range(n):
            vec = [sum(int(M[i][j]) * vec[j] for j in range(k))
                   for i in range(k)]
        return sum(a * b for a, b in zip(v, vec))

    cp = _charpoly_matrix(M)  # monic, degree k
    # b_i = -coeff of x^(k-i)
    b = tuple(-cp.coeffs[k - i] for i in range(1, k + 1))
    terms = [u(n) for n in range(2 * k + 4)]
    if b[-1] != 0:
        return Lrs(b, tuple(terms[:k]))
    # strip the power of x dividing the characteristic polynomial
    t = 0
    cs = list(cp.coeffs)
    while cs and cs[0] == 0:
        cs.pop(0)
        t += 1
    q = IntPolynomial(cs)  # q(0) != 0
    kq = q.degree
    if kq == 0:
        # nilpotent part only: the sequence vanishes from index t <= k
        if any(terms[i] != 0 for i in range(t, len(terms))):
            raise AssertionError("nilpotent analysis contradicted")
        return Lrs((1,), (0,))
    bq = tuple(-q.coeffs[kq - i] for i in range(1, kq + 1))
    candidate = Lrs(bq, tuple(terms[:kq]))
    horizon = 2 * k + kq + 2
    cand_terms = []
    it = term_iter(candidate)
    for _ in range(horizon):
        cand_terms.append(next(it))
    if all(cand_terms[n] == u(n) for n in range(kq, horizon)):
        return candidate
    raise ValueError(
        "sequence of a singular matrix has no integer recurrence "
        "without an index shift (zero eigenvalue with mixed tail)")


# ---------------------------------------------------------------------------
# Non-degeneracy partition
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _orders_with_phi_at_most(dmax: int) -> tuple:
    """All n >= 1 with Euler phi(n) <= dmax."""
    limit = 2 * dmax * dmax + 2
    return tuple(n for n in range(1, limit + 1)
                 if int(sympy.totient(n)) <= dmax)


def _angle_interval(a: AlgebraicNumber, prec: int) -> Optional[RIv]:
    """Certified representative of arg(a); the branch is unimportant since
    callers only use it modulo 2*pi."""
    box = a.refine(prec)
    try:
        if box.re.hi.sign < 0:
            # left half plane straddles the principal cut: rotate by pi
            return atan2_iv(-box.im, -box.re, prec) + pi_iv(prec)
        return atan2_iv(box.im, box.re, prec)
    except ValueError:
        return None


def quotient_torsion_order(x: AlgebraicNumber, y: AlgebraicNumber
                           ) -> Optional[int]:
    """Order of x/y when x/y is a root of unity, else None.

    Exactness: candidate orders are sieved with certified interval
    arithmetic, then each survivor n is confirmed or refuted by the exact
    test x^n == y^n.
    """
    if x == y:
        return 1
    # quotients of equal modulus only
    for prec in (64, 128, 256):
        if x.refine(prec).modulus_sq().disjoint(y.refine(prec).modulus_sq()):
            return None
    dmax = x.degree * y.degree
    candidates = _orders_with_phi_at_most(dmax)
    survivors = list(candidates)
    prev = None
    for prec in (96, 192, 384, 768):
        ax = _angle_interval(x, prec)
        ay = _angle_interval(y, prec)
        if ax is None or ay is None:
            continue
        theta = ax - ay  # arg(x/y) up to a multiple of 2*pi
        twopi = pi_iv(prec).mul_int(2)
        survivors = [n for n in survivors
                     if _near_multiple_of(theta.mul_int(n), twopi)]
        # a true torsion order keeps all its multiples alive forever, so
        # stop once the sieve stabilises (or is small) and check exactly
        if not survivors or len(survivors) <= 8 or survivors == prev:
            break
        prev = list(survivors)
    # exact confirmation, smallest first: a confirmed n bounds the order
    for n in sorted(survivors):
        if _power_equal(x, y, n):
            for d in sorted(sympy.divisors(n)):
                if _power_equal(x, y, d):
                    return d
    return None


def _near_multiple_of(nt: RIv, twopi: RIv) -> bool:
    """Certified: could nt be an exact multiple of 2*pi?"""
    k0 = round(nt.mid().as_fraction() / twopi.mid().as_fraction())
    for kk in (k0 - 1, k0, k0 + 1):
        mult = twopi.mul_int(kk)
        if not (mult.hi < nt.lo or nt.hi < mult.lo):
            return True
    return False


def _power_equal(x: AlgebraicNumber, y: AlgebraicNumber, n: int) -> bool:
    """Exact test x^n == y^n."""
    xa = NumberFieldElement.generator(x).pow(n).to_algebraic()
    ya = NumberFieldElement.generator(y).pow(n).to_algebraic()
    return xa == ya


@lru_cache(maxsize=512)
def _decimated_charpoly(p: IntPolynomial, ell: int) -> IntPolynomial:
    """Squarefree monic polynomial whose roots are the ell-th powers of the
    roots of (monic squarefree) p."""
    fy = p.to_sympy().as_expr().subs(_x, _y)
    r = sympy.resultant(fy, _x - _y ** ell, _y)
    rp = IntPolynomial.from_sympy(sympy.Poly(r, _x))
    out = rp.squarefree_part()
    assert out.leading in (1, -1)
    if out.leading == -1:
        out = -out
    return out


def partition_nondegenerate(s: Lrs, roots: Sequence[AlgebraicNumber]
                            ) -> list[Lrs]:
    """Split s into subsequences u_{ln+r} with no torsion root quotients.

    l is the exact lcm of the orders of all root-of-unity quotients of
    distinct characteristic roots (1 when none exists); interleaving the
    results reproduces s.
    """
    if not is_simple(s):
        raise ValueError("repeated characteristic roots")
    orders = []
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            n = quotient_torsion_order(roots[i], roots[j])
            if n is not None and n > 1:
                orders.append(n)
    ell = 1
    for n in orders:
        ell = lcm(ell, n)
    if ell == 1:
        return [s]
    p = char_poly(s)
    q = _decimated_charpoly(p, ell)
    kq = q.degree
    b = tuple(-q.coeffs[kq - i] for i in range(1, kq + 1))
    # enough source terms for initial segments plus verification
    need = ell * (kq + 3)
    terms = []
    it = term_iter(s)
    for _ in range(need):
        terms.append(next(it))
    subs = []
    for r in range(ell):
        init = tuple(terms[ell * n + r] for n in range(kq))
        sub = Lrs(b, init)
        for j in range(kq, kq + 3):
            assert term_at(sub, j) == terms[ell * j + r], \
                "decimated recurrence mismatch"
        subs.append(sub)
    return subs
