"""Rigorous dyadic interval arithmetic.

Everything downstream (root certification, sign decisions, torus
minimization) reduces to interval computations whose endpoints are dyadic
rationals.  All operations here round outward, so any interval returned by
this module encloses the exact mathematical value of the expression it was
built from.  External callers may convert endpoints to `fractions.Fraction`
at any time without loss.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Union


# ---------------------------------------------------------------------------
# Dyadic numbers
# ---------------------------------------------------------------------------


class Dyadic:
    """An exact dyadic rational m * 2**e with integer m, e."""

    __slots__ = ("m", "e")

    def __init__(self, m: int, e: int = 0):
        if m == 0:
            e = 0
        else:
            # normalize: odd mantissa keeps comparisons cheap
            t = (m & -m).bit_length() - 1
            if t:
                m >>= t
                e += t
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "e", e)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Dyadic is immutable")

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_fraction(x: Fraction, prec: int, round_up: bool) -> "Dyadic":
        """Nearest dyadic with 2**-prec resolution, rounded in one direction."""
        num, den = x.numerator, x.denominator
        if den & (den - 1) == 0:  # power of two: exact
            return Dyadic(num, -(den.bit_length() - 1))
        scaled = num << prec
        q, r = divmod(scaled, den)
        if r and round_up:
            q += 1
        return Dyadic(q, -prec)

    def as_fraction(self) -> Fraction:
        if self.e >= 0:
            return Fraction(self.m << self.e)
        return Fraction(self.m, 1 << -self.e)

    # -- exact arithmetic ----------------------------------------------------

    def __add__(self, o: "Dyadic") -> "Dyadic":
        if self.e >= o.e:
            return Dyadic((self.m << (self.e - o.e)) + o.m, o.e)
        return Dyadic(self.m + (o.m << (o.e - self.e)), self.e)

    def __sub__(self, o: "Dyadic") -> "Dyadic":
        if self.e >= o.e:
            return Dyadic((self.m << (self.e - o.e)) - o.m, o.e)
        return Dyadic(self.m - (o.m << (o.e - self.e)), self.e)

    def __mul__(self, o: "Dyadic") -> "Dyadic":
        return Dyadic(self.m * o.m, self.e + o.e)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.m, self.e)

    def mul_int(self, k: int) -> "Dyadic":
        return Dyadic(self.m * k, self.e)

    # -- directed rounding ---------------------------------------------------

    def round(self, prec: int, up: bool) -> "Dyadic":
        """Round so the result's exponent is at least -prec."""
        if self.e >= -prec or self.m == 0:
            return self
        shift = -prec - self.e
        q, r = divmod(self.m, 1 << shift)
        if r and up:
            q += 1
        return Dyadic(q, -prec)

    def shr(self, k: int) -> "Dyadic":
        return Dyadic(self.m, self.e - k)

    # -- comparisons (exact) -------------------------------------------------

    def _cmp(self, o: "Dyadic") -> int:
        d = self - o
        return (d.m > 0) - (d.m < 0)

    def __lt__(self, o): return self._cmp(o) < 0
    def __le__(self, o): return self._cmp(o) <= 0
    def __gt__(self, o): return self._cmp(o) > 0
    def __ge__(self, o): return self._cmp(o) >= 0

    def __eq__(self, o):
        return isinstance(o, Dyadic) and self.m == o.m and self.e == o.e

    def __hash__(self):
        return hash((self.m, self.e))

    @property
    def sign(self) -> int:
        return (self.m > 0) - (self.m < 0)

    def __float__(self):
        # may overflow for huge exponents; debugging only
        try:
            return self.m * 2.0 ** self.e
        except OverflowError:
            return float("inf") if self.m > 0 else float("-inf")

    def __repr__(self):
        return f"Dyadic({self.m}, {self.e})"


D0 = Dyadic(0)
D1 = Dyadic(1)
D2 = Dyadic(2)
DHALF = Dyadic(1, -1)


def _dy(x: Union[int, Dyadic]) -> Dyadic:
    return x if isinstance(x, Dyadic) else Dyadic(x)


# ---------------------------------------------------------------------------
# Real intervals
# ---------------------------------------------------------------------------


class RIv:
    """Closed real interval [lo, hi] with dyadic endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Dyadic, hi: Dyadic):
        assert lo <= hi, "empty interval"
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, *a):
        raise AttributeError("RIv is immutable")

    # -- construction -------------------------------------------------------

    @staticmethod
    def point(x: Union[int, Dyadic]) -> "RIv":
        d = _dy(x)
        return RIv(d, d)

    @staticmethod
    def from_fraction(x: Fraction, prec: int = 128) -> "RIv":
        return RIv(Dyadic.from_fraction(x, prec, False),
                   Dyadic.from_fraction(x, prec, True))

    @staticmethod
    def hull(ivs: Iterable["RIv"]) -> "RIv":
        ivs = list(ivs)
        return RIv(min(i.lo for i in ivs), max(i.hi for i in ivs))

    # -- arithmetic (exact endpoints) ----------------------------------------

    def __add__(self, o: "RIv") -> "RIv":
        return RIv(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, o: "RIv") -> "RIv":
        return RIv(self.lo - o.hi, self.hi - o.lo)

    def __neg__(self) -> "RIv":
        return RIv(-self.hi, -self.lo)

    def __mul__(self, o: "RIv") -> "RIv":
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RIv(min(cands), max(cands))

    def mul_int(self, k: int) -> "RIv":
        if k >= 0:
            return RIv(self.lo.mul_int(k), self.hi.mul_int(k))
        return RIv(self.hi.mul_int(k), self.lo.mul_int(k))

    def square(self) -> "RIv":
        a, b = self.lo, self.hi
        if a.sign >= 0:
            return RIv(a * a, b * b)
        if b.sign <= 0:
            return RIv(b * b, a * a)
        return RIv(D0, max(a * a, b * b))

    def inv(self, prec: int) -> "RIv":
        """1/x; requires 0 strictly outside."""
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        lo = _dyadic_div(D1, self.hi, prec, up=False)
        hi = _dyadic_div(D1, self.lo, prec, up=True)
        return RIv(lo, hi)

    def div(self, o: "RIv", prec: int) -> "RIv":
        return self * o.inv(prec)

    def abs(self) -> "RIv":
        if self.lo.sign >= 0:
            return self
        if self.hi.sign <= 0:
            return -self
        return RIv(D0, max(-self.lo, self.hi))

    def sqrt(self, prec: int) -> "RIv":
        if self.lo.sign < 0:
            raise ValueError("sqrt of interval with negative part")
        return RIv(sqrt_dyadic(self.lo, prec, up=False),
                   sqrt_dyadic(self.hi, prec, up=True))

    def rounded(self, prec: int) -> "RIv":
        return RIv(self.lo.round(prec, False), self.hi.round(prec, True))

    # -- queries -------------------------------------------------------------

    def contains_zero(self) -> bool:
        return self.lo.sign <= 0 <= self.hi.sign

    def contains(self, x: Fraction) -> bool:
        return self.lo.as_fraction() <= x <= self.hi.as_fraction()

    def contains_iv(self, o: "RIv") -> bool:
        return self.lo <= o.lo and o.hi <= self.hi

    def strictly_contains_iv(self, o: "RIv") -> bool:
        return self.lo < o.lo and o.hi < self.hi

    def disjoint(self, o: "RIv") -> bool:
        return self.hi < o.lo or o.hi < self.lo

    def sign(self) -> int:
        """-1, 0 (straddles), +1; 0 does not certify the value is zero."""
        if self.lo.sign > 0:
            return 1
        if self.hi.sign < 0:
            return -1
        return 0

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    def mid(self) -> Dyadic:
        return (self.lo + self.hi).shr(1)

    def mag(self) -> Dyadic:
        """sup |x| over the interval."""
        return max(-self.lo, self.hi)

    def mignitude(self) -> Dyadic:
        """inf |x| over the interval."""
        if self.contains_zero():
            return D0
        return self.lo if self.lo.sign > 0 else -self.hi

    def __repr__(self):
        return f"RIv[{float(self.lo):.6g}, {float(self.hi):.6g}]"


RIV_ZERO = RIv.point(0)
RIV_ONE = RIv.point(1)


def _dyadic_div(a: Dyadic, b: Dyadic, prec: int, up: bool) -> Dyadic:
    """a/b rounded to 2**-prec resolution in the given direction."""
    num = a.m
    den = b.m
    e = a.e - b.e
    if den < 0:
        num, den = -num, -den
    scaled = num << (prec + max(0, e) + 1)
    q, r = divmod(scaled, den)
    if r and up:
        q += 1
    return Dyadic(q, e - (prec + max(0, e) + 1))


def sqrt_dyadic(x: Dyadic, prec: int, up: bool) -> Dyadic:
    """Directed sqrt of a nonnegative dyadic.

    With N = floor(x * 4^prec) and r = isqrt(N): r*2^-prec <= sqrt(x) and
    (r+1)*2^-prec >= sqrt(x), since (r+1)^2 >= N+1 > x*4^prec.
    """
    if x.sign < 0:
        raise ValueError("sqrt of negative")
    if x.m == 0:
        return D0
    e_shift = x.e + 2 * prec
    if e_shift >= 0:
        n = x.m << e_shift
    else:
        n = x.m >> -e_shift
    r = isqrt(n)
    if up:
        r += 1
    return Dyadic(r, -prec)


def sqrt_fraction_iv(x: Fraction, prec: int = 128) -> RIv:
    """Certified enclosure of sqrt(x) for x >= 0."""
    if x < 0:
        raise ValueError("sqrt of negative")
    num, den = x.numerator, x.denominator
    scale = 1 << (2 * prec)
    lo = isqrt(num * scale // den) if num else 0
    loF = Fraction(lo, 1 << prec)
    hiF = Fraction(lo + 1, 1 << prec)
    return RIv(Dyadic.from_fraction(loF, prec + 2, False),
               Dyadic.from_fraction(hiF, prec + 2, True))


# ---------------------------------------------------------------------------
# Complex rectangles
# ---------------------------------------------------------------------------


class BoxIv:
    """Axis-aligned complex rectangle: re + i*im with interval parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RIv, im: RIv):
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, *a):
        raise AttributeError("BoxIv is immutable")

    @staticmethod
    def point(re: Union[int, Dyadic], im: Union[int, Dyadic] = 0) -> "BoxIv":
        return BoxIv(RIv.point(re), RIv.point(im))

    @staticmethod
    def from_fractions(re: Fraction, im: Fraction, prec: int = 128) -> "BoxIv":
        return BoxIv(RIv.from_fraction(re, prec), RIv.from_fraction(im, prec))

    def __add__(self, o: "BoxIv") -> "BoxIv":
        return BoxIv(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "BoxIv") -> "BoxIv":
        return BoxIv(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "BoxIv":
        return BoxIv(-self.re, -self.im)

    def __mul__(self, o: "BoxIv") -> "BoxIv":
        return BoxIv(self.re * o.re - self.im * o.im,
                     self.re * o.im + self.im * o.re)

    def conj(self) -> "BoxIv":
        return BoxIv(self.re, -self.im)

    def modulus_sq(self) -> RIv:
        return self.re.square() + self.im.square()

    def inv(self, prec: int) -> "BoxIv":
        den = self.modulus_sq()
        if den.contains_zero():
            raise ZeroDivisionError("box contains zero")
        inv_den = den.inv(prec)
        return BoxIv(self.re * inv_den, -(self.im * inv_den))

    def rounded(self, prec: int) -> "BoxIv":
        return BoxIv(self.re.rounded(prec), self.im.rounded(prec))

    def pow(self, n: int, prec: int) -> "BoxIv":
        """z**n by binary powering with outward rounding at each step."""
        if n < 0:
            return self.inv(prec).pow(-n, prec)
        result = BoxIv.point(1)
        base = self
        while n:
            if n & 1:
                result = (result * base).rounded(prec)
            n >>= 1
            if n:
                base = (base * base).rounded(prec)
        return result

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def contains_point(self, re: Fraction, im: Fraction) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def contains_box(self, o: "BoxIv") -> bool:
        return self.re.contains_iv(o.re) and self.im.contains_iv(o.im)

    def strictly_contains_box(self, o: "BoxIv") -> bool:
        return (self.re.strictly_contains_iv(o.re)
                and self.im.strictly_contains_iv(o.im))

    def disjoint(self, o: "BoxIv") -> bool:
        return self.re.disjoint(o.re) or self.im.disjoint(o.im)

    def diameter_sq(self) -> Dyadic:
        """Squared diagonal of the rectangle (sup distance of two points)."""
        w, h = self.re.width, self.im.width
        return w * w + h * h

    def center(self) -> "BoxIv":
        return BoxIv(RIv.point(self.re.mid()), RIv.point(self.im.mid()))

    def mag(self) -> Dyadic:
        """Upper bound for |z| over the box (via |re| + |im|, cheap)."""
        return self.re.mag() + self.im.mag()

    def distance_sq(self, o: "BoxIv") -> RIv:
        """Enclosure of |z - w|^2 over z in self, w in o."""
        return (self.re - o.re).square() + (self.im - o.im).square()

    def __repr__(self):
        return f"BoxIv({self.re!r}, {self.im!r})"


BOX_ONE = BoxIv.point(1)


# ---------------------------------------------------------------------------
# Verified elementary constants and functions
# ---------------------------------------------------------------------------

_PI_CACHE: dict[int, RIv] = {}


def _atan_inv_int(k: int, prec: int) -> Fraction:
    """Partial sum of atan(1/k) with the truncation error below 2**-(prec+4).

    Alternating series: atan(1/k) = sum (-1)^j / ((2j+1) k^(2j+1)); error is
    bounded by the first omitted term.
    """
    total = Fraction(0)
    j = 0
    k2 = k * k
    term_den = k
    while True:
        term = Fraction(1, (2 * j + 1) * term_den)
        if term < Fraction(1, 1 << (prec + 4)):
            return total
        total += term if j % 2 == 0 else -term
        term_den *= k2
        j += 1


def pi_iv(prec: int = 256) -> RIv:
    """Certified enclosure of pi via Machin's formula."""
    key = prec
    if key in _PI_CACHE:
        return _PI_CACHE[key]
    # pi = 16 atan(1/5) - 4 atan(1/239); truncation errors add up below
    # 20 * 2^-(prec+4) < 2^-(prec-1)
    a5 = _atan_inv_int(5, prec + 8)
    a239 = _atan_inv_int(239, prec + 8)
    approx = 16 * a5 - 4 * a239
    err = Fraction(40, 1 << (prec + 8))
    iv = RIv(Dyadic.from_fraction(approx - err, prec + 4, False),
             Dyadic.from_fraction(approx + err, prec + 4, True))
    _PI_CACHE[key] = iv
    return iv


def two_pi_iv(prec: int = 256) -> RIv:
    return pi_iv(prec).mul_int(2)


_LN2_CACHE: dict[int, RIv] = {}


def _atanh_frac(x: Fraction, prec: int) -> RIv:
    """Certified atanh(x) for |x| <= 1/2 via the power series."""
    assert abs(x) <= Fraction(1, 2)
    # snap to a power-of-two denominator; |atanh'| <= 4/3 on [-1/2, 1/2]
    S = prec + 16
    snapped = Fraction(round(x * (1 << S)), 1 << S)
    snap_err = 2 * abs(x - snapped)
    x = snapped
    total = Fraction(0)
    xp = x
    x2 = x * x
    j = 0
    bound = Fraction(1, 1 << (prec + 4))
    while True:
        term = xp / (2 * j + 1)
        total += term
        xp = Fraction(round(xp * x2 * (1 << S)), 1 << S)
        j += 1
        # geometric tail: |x| <= 1/2 so remaining terms are below
        # |xp| / (2j+1) / (1 - x^2) <= 2 |xp|
        if 2 * abs(xp) < bound:
            break
    err = 2 * abs(xp) + snap_err + Fraction(j + 2, 1 << S)
    return RIv(Dyadic.from_fraction(total - err, prec + 4, False),
               Dyadic.from_fraction(total + err, prec + 4, True))


def ln2_iv(prec: int = 128) -> RIv:
    if prec in _LN2_CACHE:
        return _LN2_CACHE[prec]
    iv = _atanh_frac(Fraction(1, 3), prec).mul_int(2)
    _LN2_CACHE[prec] = iv
    return iv


def ln_iv(x: Fraction, prec: int = 128) -> RIv:
    """Certified enclosure of ln(x) for a positive rational x."""
    if x <= 0:
        raise ValueError("log of non-positive value")
    # reduce to m in [2/3, 4/3): x = m * 2^e
    e = 0
    m = x
    while m >= Fraction(4, 3):
        m /= 2
        e += 1
    while m < Fraction(2, 3):
        m *= 2
        e -= 1
    # ln m = 2 atanh((m-1)/(m+1)); |(m-1)/(m+1)| <= 1/2 hmm: m in [2/3,4/3):
    # (m-1)/(m+1) in [-1/5, 1/7]; fine
    t = (m - 1) / (m + 1)
    core = _atanh_frac(t, prec).mul_int(2)
    if e == 0:
        return core
    return core + ln2_iv(prec).mul_int(e)


def ln_dyadic_iv(x: Dyadic, prec: int = 128) -> RIv:
    return ln_iv(x.as_fraction(), prec)


# -- trigonometric functions ------------------------------------------------


def _sin_cos_point(x: Dyadic, prec: int) -> tuple[RIv, RIv]:
    """Certified (sin x, cos x) for a dyadic x with |x| <= 3.5.

    Scaled-integer Taylor evaluation with explicit ulp accounting; all
    roundings are floor divisions whose errors are tracked in `err` (an
    integer number of ulps at the working scale).
    """
    S = prec + 32
    # X ~ x * 2^S with error <= 1 ulp
    if x.e + S >= 0:
        X = x.m << (x.e + S)
        x_err = 0
    else:
        X = x.m >> -(x.e + S)
        x_err = 1
    if abs(X) > (7 << S) // 2 + 2:
        raise ValueError("trig argument out of the reduced range")
    one = 1 << S
    # X2 = X*X >> S, error <= |X| * 2 * x_err / 2^S + 1 <= 8 x_err + 1 ulp
    X2 = (X * X) >> S
    x2_err = 8 * x_err + 1
    x2_abs = abs(X2) + x2_err

    def series(T0: int, T0_err: int, start_k: int):
        """sum of (-1)^k T_k with T_{k+1} = T_k * X2 / ((2k+a)(2k+b))."""
        total = 0
        total_err = 0
        T, T_err = T0, T0_err
        k = start_k
        while True:
            total += T if (k % 2 == 0) else -T
            total_err += T_err + 1
            div = (2 * k + 1) * (2 * k + 2) if start_k == 0 else None
            k += 1
            d1 = 2 * k - 1 + (1 if start_k else 0)
            d2 = 2 * k + (1 if start_k else 0)
            den = d1 * d2
            # T_next = T * X2 / (den * 2^S); propagate errors conservatively
            T_new = (T * X2) // (den << S)
            T_err = (T_err * x2_abs + abs(T) * x2_err) // (den << S) + 2
            T = T_new
            # once den > |x|^2 the terms decrease and the alternating tail
            # is bounded by the next term
            if abs(T) + T_err < 4 and den << S > x2_abs:
                total_err += abs(T) + T_err + 2
                break
        return total, total_err

    cos_t, cos_e = series(one, 0, 0)
    sin_t, sin_e = series(X, x_err, 1)
    pad = 4
    cos_iv_ = RIv(Dyadic(cos_t - cos_e - pad, -S), Dyadic(cos_t + cos_e + pad, -S))
    sin_iv_ = RIv(Dyadic(sin_t - sin_e - pad, -S), Dyadic(sin_t + sin_e + pad, -S))
    return sin_iv_, cos_iv_


def _sin_cos_point_fraction(x: Dyadic, prec: int) -> tuple[RIv, RIv]:
    """Reference implementation in exact Fractions (kept as an oracle)."""
    xf = x.as_fraction()
    assert abs(xf) <= Fraction(7, 2)
    # snap to a common denominator: both series are 1-Lipschitz, so the snap
    # error is absorbed by widening the result
    snap = Fraction(round(xf * (1 << (prec + 8))), 1 << (prec + 8))
    snap_err = abs(xf - snap)
    xf = snap
    bound = Fraction(1, 1 << (prec + 4))
    x2 = xf * xf

    # cos: sum (-1)^k x^(2k) / (2k)!
    cos_total = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        cos_total += term if k % 2 == 0 else -term
        k += 1
        term = term * x2 / ((2 * k - 1) * (2 * k))
        # once the ratio x^2/((2k+1)(2k+2)) < 1, terms decrease and the
        # alternating tail is bounded by the next term
        if term < bound and x2 < (2 * k + 1) * (2 * k + 2):
            break
    err = term + snap_err
    cos_iv_ = RIv(Dyadic.from_fraction(cos_total - err, prec + 2, False),
                  Dyadic.from_fraction(cos_total + err, prec + 2, True))

    sin_total = Fraction(0)
    term = xf
    k = 0
    while True:
        sin_total += term if k % 2 == 0 else -term
        k += 1
        term = term * x2 / ((2 * k) * (2 * k + 1))
        if abs(term) < bound and x2 < (2 * k + 2) * (2 * k + 3):
            break
    err = abs(term) + snap_err
    sin_iv_ = RIv(Dyadic.from_fraction(sin_total - err, prec + 2, False),
                  Dyadic.from_fraction(sin_total + err, prec + 2, True))
    return sin_iv_, cos_iv_


_NEG1 = RIv.point(-1)
_POS1 = RIv.point(1)
_FULL = RIv(Dyadic(-1), Dyadic(1))


def cos_iv(x: RIv, prec: int = 64) -> RIv:
    """Certified cos over a real interval."""
    pi = pi_iv(max(prec + 8, 64))
    twopi = pi.mul_int(2)
    if x.width >= twopi.hi:
        return _FULL
    # shift x by a multiple of 2 pi so the midpoint lands near 0; k need only
    # be approximately right, the shift itself is interval arithmetic
    mid = x.mid()
    ratio = mid.as_fraction() / twopi.lo.as_fraction()
    k = (ratio + Fraction(1, 2)).__floor__()
    y = x - twopi.mul_int(k)
    # now y is within about [-pi - w, pi + w]
    lo_f, hi_f = y.lo, y.hi
    if (-lo_f) > pi.hi.mul_int(2) or hi_f > pi.hi.mul_int(2):
        return _FULL  # reduction failed (huge interval); stay sound
    # evaluate at endpoints; account for interior extrema
    vals = []
    for end in (lo_f, hi_f):
        if abs(end.as_fraction()) <= Fraction(7, 2):
            vals.append(_sin_cos_point(end, prec)[1])
        else:
            # fold once more: cos(t) = cos(t - 2pi sign)
            shift = twopi if end.sign > 0 else -twopi
            folded = RIv.point(end) - shift
            vals.append(cos_iv(folded, prec))
    res = RIv.hull(vals)
    lo, hi = res.lo, res.hi
    # interior max at multiples of 2pi: does y contain 0 (or +-2pi)?
    for c in (RIv.point(0), twopi, -twopi):
        if not (c.hi < y.lo or y.hi < c.lo):
            hi = D1
            break
    # interior min at odd multiples of pi
    for c in (pi, -pi):
        if not (c.hi < y.lo or y.hi < c.lo):
            lo = Dyadic(-1)
            break
    lo = max(lo, Dyadic(-1))
    hi = min(hi, D1)
    return RIv(lo, hi)


def sin_iv(x: RIv, prec: int = 64) -> RIv:
    pi = pi_iv(max(prec + 8, 64))
    half_pi = RIv(pi.lo.shr(1), pi.hi.shr(1))
    return cos_iv(x - half_pi, prec)


def atan_iv_dyadic(x: Dyadic, prec: int = 64) -> RIv:
    """Certified atan of a dyadic point."""
    xf = x.as_fraction()
    neg = xf < 0
    if neg:
        xf = -xf
    invert = xf > 1
    if invert:
        xf = 1 / xf
    # halve until the series converges fast: atan t = 2 atan(t/(1+sqrt(1+t^2)))
    halvings = 0
    t = xf
    while t > Fraction(1, 4):
        s = sqrt_fraction_iv(1 + t * t, prec + 8)
        # use upper bound of sqrt for a slight under-estimate of t; the
        # discrepancy is absorbed by re-deriving the interval below, so we
        # instead keep t rational via an interval step
        t_lo = t / (1 + s.hi.as_fraction())
        t_hi = t / (1 + s.lo.as_fraction())
        # keep the midpoint as the new argument and inflate at the end
        t = (t_lo + t_hi) / 2
        halvings += 1
        if halvings >= 4:
            break
    # snap the argument to a power-of-two denominator so the series stays
    # in well-conditioned fractions (atan is 1-Lipschitz)
    S = prec + 16
    snapped = Fraction(round(t * (1 << S)), 1 << S)
    snap_err = abs(t - snapped)
    t = snapped
    # alternating series for atan on [0, 1/4] (or slightly above after the
    # midpoint trick: inflate the error bound to cover it)
    total = Fraction(0)
    tp = t
    t2 = t * t
    j = 0
    bound = Fraction(1, 1 << (prec + 6))
    while True:
        term = tp / (2 * j + 1)
        total += term if j % 2 == 0 else -term
        tp = Fraction(round(tp * t2 * (1 << S)), 1 << S)  # +-2^-(S+1) per step
        j += 1
        nxt = abs(tp) / (2 * j + 1)
        if nxt < bound:
            break
    # midpoint substitution error: |atan a - atan b| <= |a - b|; the series
    # roundings contribute at most (j+2) * 2^-S in total
    slack = (Fraction(1, 1 << (prec + 2)) + nxt + snap_err
             + Fraction(j + 2, 1 << S))
    res = RIv(Dyadic.from_fraction(total - slack, prec + 2, False),
              Dyadic.from_fraction(total + slack, prec + 2, True))
    for _ in range(halvings):
        res = res.mul_int(2)
    if invert:
        pi = pi_iv(prec + 8)
        res = RIv(pi.lo.shr(1), pi.hi.shr(1)) - res
    if neg:
        res = -res
    return res


def atan2_iv(im: RIv, re: RIv, prec: int = 64) -> RIv:
    """Certified principal argument of the rectangle re + i*im.

    Requires the rectangle to exclude zero and to avoid straddling the
    negative real axis (callers rotate first if necessary).
    """
    if re.contains_zero() and im.contains_zero():
        raise ValueError("argument of a box containing zero")
    pi = pi_iv(prec + 8)
    half_pi = RIv(pi.lo.shr(1), pi.hi.shr(1))
    if re.lo.sign > 0:
        # atan(im/re), monotone: use corner points
        lo = atan_iv_dyadic(_dyadic_div(im.lo, re.hi if im.lo.sign >= 0 else re.lo, prec + 8, False), prec)
        hi = atan_iv_dyadic(_dyadic_div(im.hi, re.lo if im.hi.sign >= 0 else re.hi, prec + 8, True), prec)
        return RIv(lo.lo, hi.hi)
    if im.lo.sign > 0:
        # upper half plane: rotate by -i, which subtracts pi/2 from arg
        a = atan2_iv(-re, im, prec)
        return a + half_pi
    if im.hi.sign < 0:
        # lower half plane: rotate by +i
        a = atan2_iv(re, -im, prec)
        return a - half_pi
    raise ValueError("box not contained in a usable half-plane")
