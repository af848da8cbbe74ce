"""Exact algebraic numbers in standard representation.

A number is stored as its (irreducible, primitive, positive-leading)
defining polynomial together with a complex rectangle certified to contain
exactly that root.  Certification uses a Krawczyk contraction test evaluated
in outward-rounded dyadic interval arithmetic; numeric root finding
(mpmath) only ever proposes candidate boxes, it is never trusted.

Arithmetic (sums, products, inverses, conjugates) produces results in the
same representation via resultants followed by factorisation and certified
root selection, so every operation is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Callable, Optional, Sequence

import mpmath
import sympy

from .intervals import BoxIv, Dyadic, RIv
from .polynomials import IntPolynomial, separation_bound

__all__ = [
    "AlgebraicNumber",
    "NumberFieldElement",
    "arith",
    "degree_and_height",
    "isolate_roots",
    "is_root_of_unity",
    "separation_bound",
    "sign_of_real",
    "ExactnessError",
]


class ExactnessError(Exception):
    """An exact computation exceeded its degree or precision budget."""


_DPS_LADDER = (30, 60, 120, 240, 480, 960, 1920)
_x = sympy.Symbol("x")
_y = sympy.Symbol("y")


# ---------------------------------------------------------------------------
# Certified root isolation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _mp_root_proposals(coeffs: tuple, dps: int) -> tuple:
    """Numeric roots of an integer polynomial (constant term first)."""
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c) for c in reversed(coeffs)]
        try:
            roots = mpmath.polyroots(cs, maxsteps=400, extraprec=4 * dps)
        except mpmath.libmp.NoConvergence:
            return ()
        out = []
        for r in roots:
            out.append((_mpf_to_fraction(mpmath.re(r)),
                        _mpf_to_fraction(mpmath.im(r))))
    return tuple(out)


def _mpf_to_fraction(v) -> Fraction:
    x = mpmath.mpf(v)
    if not mpmath.isfinite(x):
        raise ValueError("non-finite numeric root")
    sign, man, exp, _ = x._mpf_
    man, exp = int(man), int(exp)
    m = -man if sign else man
    if exp >= 0:
        return Fraction(m << exp)
    return Fraction(m, 1 << -exp)


def _krawczyk_unique_root(q: IntPolynomial, dq: IntPolynomial,
                          box: BoxIv, prec: int) -> bool:
    """True certifies that `box` contains exactly one root of q."""
    z0 = box.center()
    pz0 = q.eval_box(z0)
    dz0 = dq.eval_box(z0)
    msq = dz0.modulus_sq()
    if msq.contains_zero():
        return False
    inv_msq = msq.inv(prec)
    Y = BoxIv(dz0.re * inv_msq, -(dz0.im * inv_msq)).rounded(prec)
    Pp = dq.eval_box(box, prec)
    C = (BoxIv.point(1) - (Y * Pp)).rounded(prec)
    if not (C.mag() < Dyadic(1)):
        return False
    K = (z0 - (Y * pz0).rounded(prec)) + C * (box - z0)
    return box.strictly_contains_box(K)


@lru_cache(maxsize=2048)
def _certified_boxes(coeffs: tuple, dps: int) -> Optional[tuple]:
    """Pairwise-disjoint certified one-root boxes for an irreducible poly.

    Returns None when certification fails at this working precision.
    """
    q = IntPolynomial(coeffs)
    d = q.degree
    if d == 0:
        return ()
    if d == 1:
        c0, c1 = q.coeffs
        root = Fraction(-c0, c1)
        prec = int(dps * 3.4) + 8
        return (BoxIv.from_fractions(root, Fraction(0), prec),)
    dq = q.derivative()
    prec = int(dps * 3.32)
    half = Dyadic(1, -(prec // 2))
    proposals = _mp_root_proposals(coeffs, dps)
    if len(proposals) != d:
        return None
    boxes = []
    for re, im in proposals:
        c_re = Dyadic.from_fraction(re, prec, False)
        c_im = Dyadic.from_fraction(im, prec, False)
        box = BoxIv(RIv(c_re - half, c_re + half), RIv(c_im - half, c_im + half))
        if not _krawczyk_unique_root(q, dq, box, prec + 16):
            return None
        boxes.append(box)
    for i in range(d):
        for j in range(i + 1, d):
            if not boxes[i].disjoint(boxes[j]):
                return None
    return tuple(boxes)


def _level_for_boxes(q: IntPolynomial, max_diam_sq: Fraction,
                     start: int = 0) -> int:
    """Smallest ladder level whose certified boxes meet the diameter bound."""
    for i, dps in enumerate(_DPS_LADDER):
        if i < start:
            continue
        boxes = _certified_boxes(q.coeffs, dps)
        if boxes is None:
            continue
        if all(b.diameter_sq().as_fraction() < max_diam_sq for b in boxes):
            return i
    raise ExactnessError(f"could not isolate roots of {q!r}")


def _invariant_diam_sq(q: IntPolynomial) -> Fraction:
    """Required squared box diameter for the standard representation."""
    if q.degree < 2:
        return Fraction(1)  # vacuous for rational numbers
    s = separation_bound(q) / 4
    return s * s


def isolate_roots(p: IntPolynomial) -> list["AlgebraicNumber"]:
    """Standard representations of all distinct roots of p.

    Boxes are pairwise disjoint with diameters below a quarter of the
    root-separation bound of the squarefree part.
    """
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if p.degree == 0:
        return []
    sf = p.squarefree_part()
    target = _invariant_diam_sq(sf)
    factors = [f for f, _ in sf.factor_irreducible()]
    for attempt in range(len(_DPS_LADDER)):
        out: list[AlgebraicNumber] = []
        for f in factors:
            diam = min(target, _invariant_diam_sq(f))
            level = _level_for_boxes(f, diam, start=attempt)
            for b in _certified_boxes(f.coeffs, _DPS_LADDER[level]):
                out.append(AlgebraicNumber(f, b, level))
        # same-factor boxes are disjoint by certification; cross-factor
        # overlaps go away once boxes are small enough
        ok = all(out[i]._box.disjoint(out[j]._box)
                 for i in range(len(out)) for j in range(i + 1, len(out))
                 if out[i].defining_poly != out[j].defining_poly)
        if ok:
            out.sort(key=_root_sort_key)
            return out
    raise ExactnessError(f"cross-factor isolation failed for {p!r}")


def _root_sort_key(a: "AlgebraicNumber"):
    b = a._box
    return (b.re.lo.as_fraction(), b.im.lo.as_fraction())


# ---------------------------------------------------------------------------
# The number type
# ---------------------------------------------------------------------------


class AlgebraicNumber:
    """An exact algebraic number: irreducible defining polynomial + box."""

    __slots__ = ("defining_poly", "_box", "_refine_level")

    def __init__(self, poly: IntPolynomial, box: BoxIv, _level: int = 0):
        object.__setattr__(self, "defining_poly", poly)
        object.__setattr__(self, "_box", box)
        object.__setattr__(self, "_refine_level", _level)

    def __setattr__(self, *a):
        raise AttributeError("AlgebraicNumber is immutable")

    # box refinements are value-preserving, so caching them in place is fine
    def _update_box(self, box: BoxIv, level: int):
        object.__setattr__(self, "_box", box)
        object.__setattr__(self, "_refine_level", level)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(r) -> "AlgebraicNumber":
        r = Fraction(r)
        poly = IntPolynomial((-r.numerator, r.denominator)).primitive()
        box = BoxIv.from_fractions(r, Fraction(0), 64)
        return AlgebraicNumber(poly, box)

    @staticmethod
    def from_int(n: int) -> "AlgebraicNumber":
        return AlgebraicNumber.from_rational(Fraction(n))

    @staticmethod
    def from_gaussian(re: Fraction, im: Fraction) -> "AlgebraicNumber":
        """The complex rational re + i*im."""
        re, im = Fraction(re), Fraction(im)
        if im == 0:
            return AlgebraicNumber.from_rational(re)
        # (x - re)^2 + im^2, cleared to integer coefficients
        c0 = re * re + im * im
        c1 = -2 * re
        den = lcm(c0.denominator, c1.denominator)
        poly = IntPolynomial((int(c0 * den), int(c1 * den), den)).primitive()
        prec = 64
        while True:
            box = BoxIv.from_fractions(re, im, prec)
            if box.diameter_sq().as_fraction() < _invariant_diam_sq(poly):
                return AlgebraicNumber(poly, box)
            prec *= 2

    # -- representation ------------------------------------------------------

    @property
    def box(self) -> BoxIv:
        return self._box

    @property
    def degree(self) -> int:
        return self.defining_poly.degree

    @property
    def height(self) -> int:
        return self.defining_poly.height

    def __repr__(self):
        c = self._box.center()
        return (f"AlgebraicNumber({self.defining_poly!r} @ "
                f"{float(c.re.lo)}{float(c.im.lo):+}j)")

    # -- rationality / reality ----------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational number")
        c0, c1 = self.defining_poly.coeffs
        return Fraction(-c0, c1)

    @property
    def is_zero(self) -> bool:
        return self.defining_poly.coeffs == (0, 1)

    @property
    def is_real(self) -> bool:
        # the box invariant (diameter < separation/4) makes this exact: the
        # conjugate is also a root, and a box this small straddling the real
        # axis can only hold a real root
        if self.is_rational:
            return True
        return self._box.im.contains_zero()

    # -- refinement ----------------------------------------------------------

    def refine(self, prec: int) -> BoxIv:
        """A certified box of diameter at most 2^(1-prec)."""
        limit = Fraction(1, 1 << (2 * prec - 2))
        if self._box.diameter_sq().as_fraction() <= limit:
            return self._box
        if self.is_rational:
            r = self.as_rational()
            box = BoxIv.from_fractions(r, Fraction(0), prec + 4)
            self._update_box(box, self._refine_level)
            return box
        invariant_limit = _invariant_diam_sq(self.defining_poly)
        level = self._refine_level
        q = self.defining_poly
        while True:
            level += 1
            if level >= len(_DPS_LADDER):
                raise ExactnessError("refinement ladder exhausted")
            boxes = _certified_boxes(q.coeffs, _DPS_LADDER[level])
            if boxes is None:
                continue
            hits = [b for b in boxes if not b.disjoint(self._box)]
            if len(hits) != 1:
                continue
            new = hits[0]
            d = new.diameter_sq().as_fraction()
            if d < invariant_limit and d < self._box.diameter_sq().as_fraction():
                self._update_box(new, level)
                if d <= limit:
                    return new

    def approx(self, prec: int) -> BoxIv:
        return self.refine(prec)

    # -- equality ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        if self.defining_poly != other.defining_poly:
            return False
        # same irreducible polynomial: boxes of width < sep/4 overlap
        # exactly when they hold the same root
        return not self._box.disjoint(other._box)

    def __hash__(self):
        return hash(self.defining_poly)

    # -- arithmetic ----------------------------------------------------------

    def conj(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.defining_poly, self._box.conj(),
                               self._refine_level)

    def __neg__(self) -> "AlgebraicNumber":
        p = self.defining_poly
        flipped = IntPolynomial(tuple(c if i % 2 == 0 else -c
                                      for i, c in enumerate(p.coeffs))).primitive()
        return AlgebraicNumber(flipped, -self._box, self._refine_level)

    def __add__(self, other) -> "AlgebraicNumber":
        other = _coerce(other)
        if self.is_rational:
            return _shift_rational(other, self.as_rational())
        if other.is_rational:
            return _shift_rational(self, other.as_rational())
        cands = _add_candidates(self.defining_poly, other.defining_poly)
        return _locate(cands, lambda pr: self.refine(pr) + other.refine(pr))

    def __sub__(self, other) -> "AlgebraicNumber":
        return self + (-_coerce(other))

    def __mul__(self, other) -> "AlgebraicNumber":
        other = _coerce(other)
        if self.is_rational:
            return _scale_rational(other, self.as_rational())
        if other.is_rational:
            return _scale_rational(self, other.as_rational())
        cands = _mul_candidates(self.defining_poly, other.defining_poly)
        return _locate(cands, lambda pr: (self.refine(pr) * other.refine(pr)).rounded(pr))

    def inv(self) -> "AlgebraicNumber":
        if self.is_zero:
            raise ZeroDivisionError("division by zero")
        if self.is_rational:
            return AlgebraicNumber.from_rational(1 / self.as_rational())
        q = self.defining_poly.reverse().primitive()
        return _locate([q], lambda pr: self.refine(pr).inv(pr))

    def div(self, other) -> "AlgebraicNumber":
        return self * _coerce(other).inv()

    def modulus_sq(self) -> "AlgebraicNumber":
        if self.is_rational:
            r = self.as_rational()
            return AlgebraicNumber.from_rational(r * r)
        res = self * self.conj()
        assert res.is_real
        return res

    def re_part(self) -> "AlgebraicNumber":
        if self.is_real:
            return self
        return _scale_rational(self + self.conj(), Fraction(1, 2))

    def im_part(self) -> "AlgebraicNumber":
        """Imaginary part as a real algebraic number."""
        if self.is_real:
            return AlgebraicNumber.from_rational(0)
        diff = self - self.conj()  # purely imaginary
        # multiply by -i/2
        return diff * AlgebraicNumber.from_gaussian(Fraction(0), Fraction(-1, 2))

    def pow_int(self, n: int) -> "AlgebraicNumber":
        if n == 0:
            return AlgebraicNumber.from_rational(1)
        if n < 0:
            return self.inv().pow_int(-n)
        if self.is_rational:
            return AlgebraicNumber.from_rational(self.as_rational() ** n)
        elem = NumberFieldElement.generator(self).pow(n)
        return elem.to_algebraic()

    # -- signs and comparisons -----------------------------------------------

    def sign_real(self) -> int:
        """Exact sign of a real algebraic number."""
        if not self.is_real:
            raise ValueError("non-real operand")
        if self.is_rational:
            r = self.as_rational()
            return (r > 0) - (r < 0)
        # irreducible non-linear polynomial: the root is never 0, refine
        # until the real interval excludes it
        prec = 32
        while True:
            box = self.refine(prec)
            s = box.re.sign()
            if s != 0:
                return s
            prec *= 2
            if prec > 1 << 16:
                raise ExactnessError("sign refinement exhausted")

    def compare_real(self, other) -> int:
        other = _coerce(other)
        if not (self.is_real and other.is_real):
            raise ValueError("non-real comparison")
        if self == other:
            return 0
        prec = 32
        while True:
            a, b = self.refine(prec).re, other.refine(prec).re
            if a.disjoint(b):
                return 1 if a.lo > b.hi else -1
            prec *= 2
            if prec > 1 << 16:
                raise ExactnessError("comparison refinement exhausted")

    def is_unit_modulus(self) -> bool:
        m = self.modulus_sq()
        return m.is_rational and m.as_rational() == 1

    def __float__(self):
        b = self.refine(64)
        return float(b.re.mid())

    def __complex__(self):
        b = self.refine(64)
        return complex(float(b.re.mid()), float(b.im.mid()))


def _coerce(v) -> AlgebraicNumber:
    if isinstance(v, AlgebraicNumber):
        return v
    if isinstance(v, (int, Fraction)):
        return AlgebraicNumber.from_rational(Fraction(v))
    raise TypeError(f"cannot coerce {v!r} to AlgebraicNumber")


# ---------------------------------------------------------------------------
# Resultant machinery
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1024)
def _add_candidates(pc: IntPolynomial, qc: IntPolynomial) -> tuple:
    """Irreducible candidates for the minimal polynomial of alpha + beta."""
    fy = pc.to_sympy().as_expr().subs(_x, _y)
    gexpr = qc.to_sympy().as_expr().subs(_x, _x - _y)
    r = sympy.resultant(fy, sympy.expand(gexpr), _y)
    rp = IntPolynomial.from_sympy(sympy.Poly(r, _x)).primitive()
    return tuple(f for f, _ in rp.factor_irreducible())


@lru_cache(maxsize=1024)
def _mul_candidates(pc: IntPolynomial, qc: IntPolynomial) -> tuple:
    """Irreducible candidates for the minimal polynomial of alpha * beta."""
    fy = pc.to_sympy().as_expr().subs(_x, _y)
    m = qc.degree
    gexpr = sympy.expand(sum(c * _x ** j * _y ** (m - j)
                             for j, c in enumerate(qc.coeffs)))
    r = sympy.resultant(fy, gexpr, _y)
    rp = IntPolynomial.from_sympy(sympy.Poly(r, _x)).primitive()
    return tuple(f for f, _ in rp.factor_irreducible())


def _locate(candidates: Sequence[IntPolynomial],
            approx: Callable[[int], BoxIv]) -> AlgebraicNumber:
    """Certified selection of the candidate polynomial and root box that
    hold the exact value enclosed by approx(prec)."""
    candidates = list(candidates)
    for dps in _DPS_LADDER:
        prec = int(dps * 3.32)
        S = approx(prec)
        alive = []
        for f in candidates:
            if f.degree == 1:
                r = Fraction(-f.coeffs[0], f.coeffs[1])
                if S.contains_point(r, Fraction(0)):
                    alive.append(f)
            elif f.eval_box(S, prec + 16).contains_zero():
                alive.append(f)
        if not alive:
            raise AssertionError("no candidate polynomial can hold the value")
        if len(alive) > 1:
            continue
        f = alive[0]
        if f.degree == 1:
            return AlgebraicNumber.from_rational(Fraction(-f.coeffs[0], f.coeffs[1]))
        boxes = _certified_boxes(f.coeffs, dps)
        if boxes is None:
            continue
        if not all(b.diameter_sq().as_fraction() < _invariant_diam_sq(f)
                   for b in boxes):
            continue
        hits = [b for b in boxes if not b.disjoint(S)]
        if len(hits) == 1:
            return AlgebraicNumber(f, hits[0])
    raise ExactnessError("could not locate exact result")


def _shift_rational(a: AlgebraicNumber, r: Fraction) -> AlgebraicNumber:
    """a + r for rational r."""
    if a.is_rational:
        return AlgebraicNumber.from_rational(a.as_rational() + r)
    if r == 0:
        return a
    # q(X) = p(X - r), cleared to integer coefficients
    shifted = _substitute_linear(a.defining_poly, Fraction(1), -r)
    return _locate([shifted],
                   lambda pr: a.refine(pr) + BoxIv.from_fractions(r, Fraction(0), pr))


def _scale_rational(a: AlgebraicNumber, r: Fraction) -> AlgebraicNumber:
    """a * r for rational r."""
    if r == 0:
        return AlgebraicNumber.from_rational(0)
    if a.is_rational:
        return AlgebraicNumber.from_rational(a.as_rational() * r)
    p = a.defining_poly
    scaled = _substitute_linear(p, 1 / r, Fraction(0))
    return _locate([scaled],
                   lambda pr: (a.refine(pr) * BoxIv.from_fractions(r, Fraction(0), pr)).rounded(pr))


def _substitute_linear(p: IntPolynomial, s: Fraction, t: Fraction) -> IntPolynomial:
    """Primitive integer polynomial proportional to p(s*X + t)."""
    # Horner in Fraction coefficients
    coeffs: list[Fraction] = [Fraction(0)]
    for c in reversed(p.coeffs):
        # multiply current poly by (s X + t) and add c
        new = [Fraction(0)] * (len(coeffs) + 1)
        for i, v in enumerate(coeffs):
            new[i + 1] += v * s
            new[i] += v * t
        new[0] += c
        coeffs = new
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    return IntPolynomial(tuple(int(c * den) for c in coeffs)).primitive()


# ---------------------------------------------------------------------------
# Number field elements (internal)
# ---------------------------------------------------------------------------


def _qp_trim(cs: list[Fraction]) -> tuple:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _qp_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Polynomial division over Q, coefficients constant-first."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - 1 - db
        f = a[-1] / lb
        q[k] = f
        for i in range(db + 1):
            a[k + i] -= f * b[i]
        a.pop()
    return _qp_trim(q), _qp_trim(a)


class NumberFieldElement:
    """Element of Q(theta) for an algebraic generator, as a residue poly."""

    __slots__ = ("gen", "coeffs")

    def __init__(self, gen: AlgebraicNumber, coeffs: Sequence[Fraction]):
        cs = [Fraction(c) for c in coeffs]
        if len(cs) >= gen.degree:
            mod = [Fraction(c) for c in gen.defining_poly.coeffs]
            _, cs = _qp_divmod(cs, mod)
            cs = list(cs)
        object.__setattr__(self, "gen", gen)
        object.__setattr__(self, "coeffs", _qp_trim(list(cs)))

    def __setattr__(self, *a):
        raise AttributeError("NumberFieldElement is immutable")

    @staticmethod
    def generator(gen: AlgebraicNumber) -> "NumberFieldElement":
        return NumberFieldElement(gen, (Fraction(0), Fraction(1)))

    @staticmethod
    def constant(gen: AlgebraicNumber, c: Fraction) -> "NumberFieldElement":
        return NumberFieldElement(gen, (Fraction(c),))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("element is irrational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __add__(self, o: "NumberFieldElement") -> "NumberFieldElement":
        n = max(len(self.coeffs), len(o.coeffs))
        cs = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            cs[i] += c
        for i, c in enumerate(o.coeffs):
            cs[i] += c
        return NumberFieldElement(self.gen, cs)

    def __sub__(self, o: "NumberFieldElement") -> "NumberFieldElement":
        n = max(len(self.coeffs), len(o.coeffs))
        cs = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            cs[i] += c
        for i, c in enumerate(o.coeffs):
            cs[i] -= c
        return NumberFieldElement(self.gen, cs)

    def __neg__(self):
        return NumberFieldElement(self.gen, [-c for c in self.coeffs])

    def __mul__(self, o: "NumberFieldElement") -> "NumberFieldElement":
        if self.is_zero or o.is_zero:
            return NumberFieldElement(self.gen, ())
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return NumberFieldElement(self.gen, out)

    def scale(self, r: Fraction) -> "NumberFieldElement":
        return NumberFieldElement(self.gen, [c * r for c in self.coeffs])

    def inv(self) -> "NumberFieldElement":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero field element")
        if self.is_rational:
            return NumberFieldElement(self.gen, (1 / self.coeffs[0],))
        # extended Euclid: u*self + v*minpoly = 1 in Q[x]
        mod = tuple(Fraction(c) for c in self.gen.defining_poly.coeffs)
        r0, r1 = mod, self.coeffs
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = _qp_divmod(r0, r1)
            # s_next = s0 - q*s1
            prod = [Fraction(0)] * (len(q) + len(s1)) if q and s1 else []
            for i, a in enumerate(q):
                for j, b in enumerate(s1):
                    prod[i + j] += a * b
            n = max(len(s0), len(prod))
            s_next = [Fraction(0)] * n
            for i, c in enumerate(s0):
                s_next[i] += c
            for i, c in enumerate(prod):
                s_next[i] -= c
            r0, r1 = r1, r
            s0, s1 = s1, _qp_trim(s_next)
        # r0 is the gcd: a nonzero constant since minpoly is irreducible
        assert len(r0) == 1
        c = r0[0]
        return NumberFieldElement(self.gen, [v / c for v in s0])

    def div(self, o: "NumberFieldElement") -> "NumberFieldElement":
        return self * o.inv()

    def pow(self, n: int) -> "NumberFieldElement":
        if n < 0:
            return self.inv().pow(-n)
        result = NumberFieldElement.constant(self.gen, Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, o):
        return (isinstance(o, NumberFieldElement) and self.gen == o.gen
                and self.coeffs == o.coeffs)

    def __hash__(self):
        return hash((self.gen, self.coeffs))

    def eval_box(self, prec: int) -> BoxIv:
        g = self.gen.refine(prec)
        r = BoxIv.point(0)
        for c in reversed(self.coeffs):
            r = (r * g + BoxIv.from_fractions(c, Fraction(0), prec)).rounded(prec)
        return r

    def to_algebraic(self) -> AlgebraicNumber:
        if self.is_rational:
            return AlgebraicNumber.from_rational(self.as_rational())
        cands = _element_candidates(self.gen.defining_poly, self.coeffs)
        return _locate(cands, self.eval_box)


@lru_cache(maxsize=4096)
def _element_candidates(gen_poly: IntPolynomial, coeffs: tuple) -> tuple:
    """Minimal-polynomial candidates for g(theta) via a resultant in theta."""
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    G = sum(int(c * den) * _y ** i for i, c in enumerate(coeffs))
    fy = gen_poly.to_sympy().as_expr().subs(_x, _y)
    r = sympy.resultant(fy, den * _x - G, _y)
    rp = IntPolynomial.from_sympy(sympy.Poly(r, _x)).primitive()
    return tuple(f for f, _ in rp.factor_irreducible())


# ---------------------------------------------------------------------------
# Spec-level operation surface
# ---------------------------------------------------------------------------


def arith(op: str, x: AlgebraicNumber, y: Optional[AlgebraicNumber] = None
          ) -> AlgebraicNumber:
    """Dispatch for the exact arithmetic operations."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inv()
    if op == "conj":
        return x.conj()
    if op == "modulus_sq":
        return x.modulus_sq()
    raise ValueError(f"unknown operation {op!r}")


def sign_of_real(x: AlgebraicNumber) -> int:
    return x.sign_real()


def degree_and_height(x: AlgebraicNumber) -> tuple[int, int]:
    return x.degree, x.height


@lru_cache(maxsize=64)
def _totient_matches(d: int) -> tuple:
    """All n with Euler phi(n) == d (finite: phi(n) >= sqrt(n/2))."""
    limit = 2 * d * d + 2
    return tuple(n for n in range(1, limit + 1) if int(sympy.totient(n)) == d)


@lru_cache(maxsize=512)
def _cyclotomic(n: int) -> IntPolynomial:
    return IntPolynomial.from_sympy(sympy.Poly(sympy.cyclotomic_poly(n, _x), _x))


def is_root_of_unity(x: AlgebraicNumber) -> Optional[int]:
    """The order of x when x is a root of unity, else None."""
    if x.is_rational:
        r = x.as_rational()
        if r == 1:
            return 1
        if r == -1:
            return 2
        return None
    p = x.defining_poly
    if p.leading != 1 or abs(p.coeffs[0]) != 1:
        return None  # cyclotomic polynomials are monic with constant +-1
    for n in _totient_matches(p.degree):
        if p == _cyclotomic(n):
            # power-and-compare confirmation: x^n == 1 exactly
            powered = NumberFieldElement.generator(x).pow(n)
            assert powered.is_rational and powered.as_rational() == 1
            return n
    return None


def root_of_unity(num: int, den: int) -> AlgebraicNumber:
    """exp(2*pi*i*num/den) as an exact algebraic number."""
    if den < 1:
        raise ValueError("denominator must be positive")
    num %= den
    g = gcd(num, den) if num else den
    num_r, den_r = num // g, den // g
    if den_r == 1:
        return AlgebraicNumber.from_rational(1)
    if den_r == 2:
        return AlgebraicNumber.from_rational(-1)
    roots = isolate_roots(_cyclotomic(den_r))
    from .intervals import _dyadic_div, cos_iv, pi_iv, sin_iv

    for prec in (64, 128, 256, 512):
        angle = pi_iv(prec).mul_int(2 * num_r)
        lo = _dyadic_div(angle.lo, Dyadic(den_r), prec, False)
        hi = _dyadic_div(angle.hi, Dyadic(den_r), prec, True)
        aiv = RIv(lo, hi)
        target = BoxIv(cos_iv(aiv, prec), sin_iv(aiv, prec))
        hits = [r for r in roots if not r.refine(prec // 2).disjoint(target)]
        if len(hits) == 1:
            return hits[0]
    raise ExactnessError("could not select root of unity branch")
