"""Spectral analysis of a simple LRS.

Splits the characteristic roots into real roots and conjugate pairs,
derives the exact closed-form coefficients (the unique solution of the
order-k linear system), normalizes by the dominant modulus, and certifies
a tail bound for the sub-dominant contribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebraic import (AlgebraicNumber, ExactnessError, NumberFieldElement,
                        is_root_of_unity, isolate_roots)
from .intervals import BoxIv, RIv, ln_iv
from .lrs import Lrs, char_poly, is_simple
from .polynomials import IntPolynomial


@dataclass(frozen=True)
class RootContribution:
    """One characteristic root with its exact closed-form coefficient."""

    root: AlgebraicNumber
    coeff: AlgebraicNumber

    @property
    def coeff_is_zero(self) -> bool:
        return self.coeff.is_zero


@dataclass(frozen=True)
class RootDecomposition:
    """Closed form u_n = sum a_i rho_i^n + sum (c_j g_j^n + conj)."""

    lrs: Lrs
    real_roots: tuple      # RootContribution, real roots
    complex_pairs: tuple   # RootContribution, one per pair, positive imag
    dominant_modulus: Optional[AlgebraicNumber] = None

    def all_contributions(self):
        return self.real_roots + self.complex_pairs


@dataclass(frozen=True)
class FilterOutcome:
    """Early exit of the dominance analysis."""

    kind: str  # "oscillating" (no positive real dominant root) or "zero"
    detail: str = ""


@dataclass(frozen=True)
class DominantNormalization:
    """Data of u_n / rho^n = a + sum (c_j lam_j^n + conj) + r(n)."""

    rho: AlgebraicNumber
    a: AlgebraicNumber
    lambdas: tuple          # unit-modulus lam_j = g_j / rho, one per pair
    c: tuple                # coefficients c_j of the dominant pairs
    residual_terms: tuple   # (weight, coeff, root): |term| <= weight*|coeff|*|root|^n
    dominant_msq: AlgebraicNumber = None

    @property
    def m(self) -> int:
        return len(self.lambdas)

    @property
    def has_residual(self) -> bool:
        return bool(self.residual_terms)


@dataclass(frozen=True)
class TailBound:
    """For all n > N: |r(n)| < (1 - epsilon)^n."""

    epsilon: Fraction
    N: int


# ---------------------------------------------------------------------------
# Closed-form coefficients
# ---------------------------------------------------------------------------


def _coefficient_for_root(p: IntPolynomial, u: tuple,
                          root: AlgebraicNumber) -> AlgebraicNumber:
    """Exact coefficient of root^n in the closed form.

    With p monic and squarefree, the coefficient equals
    (sum_t s_t u_t) / p'(root) where s_t are the synthetic-division
    coefficients of p / (x - root); all arithmetic happens in Q(root).
    """
    k = p.degree
    theta = NumberFieldElement.generator(root)
    one = NumberFieldElement.constant(root, Fraction(1))
    # synthetic division: s_{k-1} = 1, s_{j-1} = p_j + root*s_j
    s = [None] * k
    s[k - 1] = one
    for j in range(k - 1, 0, -1):
        s[j - 1] = theta * s[j] + NumberFieldElement.constant(
            root, Fraction(p.coeffs[j]))
    acc = NumberFieldElement(root, ())
    for t in range(k):
        if u[t]:
            acc = acc + s[t].scale(Fraction(u[t]))
    dp = p.derivative()
    dp_at = NumberFieldElement(root, tuple(Fraction(c) for c in dp.coeffs))
    return acc.div(dp_at).to_algebraic()


def decompose(s: Lrs) -> RootDecomposition:
    """Roots and exact closed-form coefficients of a simple LRS."""
    if not is_simple(s):
        raise ValueError("repeated characteristic roots")
    p = char_poly(s)
    roots = isolate_roots(p)
    reals = []
    pairs = []
    conj_coeffs = {}
    for r in roots:
        if r.is_real:
            reals.append(RootContribution(r, _coefficient_for_root(p, s.initial, r)))
        elif r.box.im.lo.sign > 0:
            pairs.append(RootContribution(r, _coefficient_for_root(p, s.initial, r)))
    dec = RootDecomposition(s, tuple(reals), tuple(pairs))
    _check_reconstruction(dec)
    return dec


def _check_reconstruction(dec: RootDecomposition, prec: int = 192):
    """Interval check that the closed form reproduces u_0..u_{k-1}."""
    s = dec.lrs
    k = s.order
    for n in range(k):
        total = RIv.point(0)
        for rc in dec.real_roots:
            term = (rc.coeff.refine(prec) * rc.root.refine(prec).pow(n, prec))
            total = total + term.re
        for rc in dec.complex_pairs:
            term = (rc.coeff.refine(prec) * rc.root.refine(prec).pow(n, prec))
            total = total + term.re.mul_int(2)
        if not total.contains(Fraction(s.initial[n])):
            raise AssertionError(
                f"closed-form reconstruction failed at index {n}")


# ---------------------------------------------------------------------------
# Dominance
# ---------------------------------------------------------------------------


def _modulus_sq_cached(rc: RootContribution, cache: dict) -> AlgebraicNumber:
    key = id(rc)
    if key not in cache:
        cache[key] = rc.root.modulus_sq()
    return cache[key]


def _dominant_split(contribs: list) -> tuple:
    """Partition contributions into (dominant, residual) by exact modulus."""
    cache: dict = {}
    # interval pre-pass: drop everything certifiably below the running max
    prec = 96
    while True:
        msq_ivs = [c.root.refine(prec).modulus_sq() for c in contribs]
        max_lo = max(iv.lo for iv in msq_ivs)
        alive = [i for i, iv in enumerate(msq_ivs) if not (iv.hi < max_lo)]
        # alive roots pairwise-overlap with the max candidate; settle exactly
        if len(alive) == 1 or prec >= 768:
            break
        # try to shrink the alive set further
        survivors = set(alive)
        for i in alive:
            for j in alive:
                if i != j and msq_ivs[i].hi < msq_ivs[j].lo:
                    survivors.discard(i)
        alive = sorted(survivors)
        if len(alive) == 1:
            break
        prec *= 2
    if len(alive) == 1:
        dom_idx = set(alive)
        return ([contribs[i] for i in sorted(dom_idx)],
                [contribs[i] for i in range(len(contribs)) if i not in dom_idx],
                _modulus_sq_cached(contribs[alive[0]], cache))
    # exact comparison among the ambiguous candidates
    msqs = {i: _modulus_sq_cached(contribs[i], cache) for i in alive}
    best = alive[0]
    for i in alive[1:]:
        if msqs[i].compare_real(msqs[best]) > 0:
            best = i
    dom = [i for i in alive if msqs[i].compare_real(msqs[best]) == 0]
    dom_set = set(dom)
    return ([contribs[i] for i in sorted(dom_set)],
            [contribs[i] for i in range(len(contribs)) if i not in dom_set],
            msqs[best])


def dominant_normalize(dec: RootDecomposition):
    """DominantNormalization, or a FilterOutcome when no positive real root
    attains the maximal modulus (the sequence then oscillates in sign)."""
    supported = [rc for rc in dec.all_contributions() if not rc.coeff_is_zero]
    if not supported:
        return FilterOutcome("zero", "all closed-form coefficients vanish")
    dominant, residual, dom_msq = _dominant_split(supported)
    rho_rc = None
    for rc in dominant:
        if rc.root.is_real and rc.root.sign_real() > 0:
            rho_rc = rc
        elif rc.root.is_real and rc.root.sign_real() < 0:
            # a negative real dominant root next to a positive one would
            # make their quotient -1, contradicting non-degeneracy
            if rho_rc is not None or any(
                    c.root.is_real and c.root.sign_real() > 0 for c in dominant):
                raise ValueError("degenerate sequence")
    if rho_rc is None:
        return FilterOutcome(
            "oscillating", "no real positive dominant characteristic root")
    rho = rho_rc.root
    lambdas = []
    cs = []
    for rc in dominant:
        if rc is rho_rc:
            continue
        if rc.root.is_real:
            raise ValueError("degenerate sequence")
        lambdas.append(rc.root.div(rho))
        cs.append(rc.coeff)
    for lam in lambdas:
        if is_root_of_unity(lam) is not None:
            raise ValueError("degenerate sequence")
    residual_terms = tuple(
        (1 if rc.root.is_real else 2, rc.coeff, rc.root) for rc in residual)
    return DominantNormalization(rho, rho_rc.coeff, tuple(lambdas), tuple(cs),
                                 residual_terms, dom_msq)


# ---------------------------------------------------------------------------
# Tail bound
# ---------------------------------------------------------------------------


def _upper_bound_fraction(iv: RIv) -> Fraction:
    return iv.hi.as_fraction()


def tail_bound(dn: DominantNormalization) -> TailBound:
    """Certified epsilon and N with |r(n)| < (1-epsilon)^n for all n > N."""
    if not dn.has_residual:
        return TailBound(Fraction(1, 2), 0)
    prec = 128
    while True:
        items = []
        ubar = Fraction(0)
        ok = True
        for weight, coeff, root in dn.residual_terms:
            if coeff.is_rational:
                c_ub = abs(coeff.as_rational()) * weight
            else:
                c_ub = _sqrt_ub(_upper_bound_fraction(
                    coeff.refine(prec).modulus_sq())) * weight
            if root.is_rational and dn.rho.is_rational:
                r_ub = abs(root.as_rational()) / dn.rho.as_rational()
            else:
                rho_sq_lo = dn.rho.refine(prec).modulus_sq().lo.as_fraction()
                ratio_sq_ub = (_upper_bound_fraction(
                    root.refine(prec).modulus_sq()) / rho_sq_lo)
                r_ub = _sqrt_ub(ratio_sq_ub)
            if r_ub >= 1:
                ok = False
                break
            items.append((c_ub, r_ub))
            ubar = max(ubar, r_ub)
        if ok:
            break
        prec *= 2
        if prec > 1 << 14:
            raise ExactnessError("residual modulus bound did not certify")
    epsilon = (1 - ubar) / 2
    one_minus_eps = (1 + ubar) / 2
    # f(n) = sum C_i (r_i / (1-eps))^n is strictly decreasing; N is one
    # less than the first n with f(n) < 1
    ratios = [(c, r / one_minus_eps) for c, r in items]
    total0 = sum(c for c, _ in ratios)
    if total0 < 1:
        return TailBound(epsilon, 0)

    def f_below_one(n: int) -> bool:
        return _certified_sum_pow_below(ratios, n, Fraction(1))

    # log-space initial guess, then certify by direct evaluation
    qmax = max(q for _, q in ratios)
    guess = 1
    # total0 * qmax^n < 1 is sufficient
    ln_t = ln_iv(total0, 64).hi.as_fraction()
    ln_q = ln_iv(qmax, 64).hi.as_fraction()  # negative
    if ln_q < 0:
        guess = max(1, int(-ln_t / ln_q) + 1)
    while not f_below_one(guess):
        guess *= 2
        if guess > 1 << 40:
            raise ExactnessError("tail threshold search diverged")
    lo, hi = 0, guess  # f_below_one(hi) true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f_below_one(mid):
            hi = mid
        else:
            lo = mid
    return TailBound(epsilon, max(hi - 1, 0))


def _riv_pow(base: RIv, n: int, prec: int) -> RIv:
    result = RIv.point(1)
    b = base
    while n:
        if n & 1:
            result = (result * b).rounded(prec)
        n >>= 1
        if n:
            b = (b * b).rounded(prec)
    return result


def _certified_sum_pow_below(items, n: int, target: Fraction) -> bool:
    """Certified decision of sum c_i q_i^n < target (c_i, q_i >= 0)."""
    for prec in (128, 256, 512, 1024):
        total = RIv.point(0)
        for c, q in items:
            civ = RIv.from_fraction(c, prec)
            qiv = RIv.from_fraction(q, prec)
            total = total + (civ * _riv_pow(qiv, n, prec)).rounded(prec)
        if total.hi.as_fraction() < target:
            return True
        if total.lo.as_fraction() >= target:
            return False
    # exact fallback (small instances only reach this)
    return sum(c * q ** n for c, q in items) < target


def _sqrt_ub(x: Fraction) -> Fraction:
    """Rational upper bound of sqrt(x), x >= 0."""
    from math import isqrt
    if x == 0:
        return Fraction(0)
    bits = 64
    n = isqrt((x.numerator << (2 * bits)) // x.denominator) + 1
    return Fraction(n, 1 << bits)


def positivity_threshold(a_plus_mu_lb: Fraction, tail: TailBound) -> int:
    """Least N' >= tail.N with (1-eps)^n <= a_plus_mu_lb for all n > N'.

    Beyond this index the dominant part outweighs the residual, so every
    term is positive.
    """
    assert a_plus_mu_lb > 0
    base = 1 - tail.epsilon
    if a_plus_mu_lb >= 1:
        return tail.N

    def ok(n: int) -> bool:
        return _certified_sum_pow_below([(Fraction(1), base)], n,
                                        a_plus_mu_lb)

    ln_a = ln_iv(a_plus_mu_lb, 64).hi.as_fraction()   # negative
    ln_b = ln_iv(base, 64).hi.as_fraction()           # negative
    guess = max(1, int(ln_a / ln_b) + 1)
    while not ok(guess):
        guess *= 2
        if guess > 1 << 40:
            raise ExactnessError("positivity threshold search diverged")
    lo, hi = 0, guess
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    # (1-eps)^n decreasing: ok holds for all n >= hi
    return max(tail.N, hi - 1)
