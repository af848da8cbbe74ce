"""Positivity and Ultimate Positivity for simple integer LRS of order <= 9.

Pipeline per non-degenerate subsequence:

  1. no positive real dominant root  ->  the sign oscillates forever;
  2. dominant normalization u_n / rho^n = a + h(orbit) + r(n);
  3. sign of a + min h over the orbit-closure torus decides ultimate
     positivity, with three regimes: strictly positive (tail threshold),
     strictly negative (witnesses exist), and the exact critical case where
     unit-circle gap bounds produce an explicit, possibly astronomical,
     threshold;
  4. positivity follows from an exhaustive exact check up to the threshold
     (or the budget, yielding a conditional verdict).

Every verdict carries a machine-checkable certificate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebraic import AlgebraicNumber, ExactnessError, isolate_roots
from .lrs import Lrs, char_poly, is_simple, partition_nondegenerate, \
    term_at, term_at_pow, term_iter
from .relations import RelationLattice, TorusPoint, compute_lattice, \
    density_search
from .spectral import DominantNormalization, FilterOutcome, TailBound, \
    decompose, dominant_normalize, positivity_threshold, tail_bound
from .torusmin import GapCertificate, MinCertificate, TrigForm, \
    baker_exponent, check_finiteness, collision_horizon, exclusion_radius, \
    gap_polynomial, minimize_h, minimizer_first_coords

MAX_ORDER = 9

POSITIVE = "Positive"
NOT_POSITIVE = "NotPositive"
ULTIMATELY_POSITIVE = "UltimatelyPositive"
NOT_ULTIMATELY_POSITIVE = "NotUltimatelyPositive"
POSITIVE_CONDITIONAL = "PositiveConditional"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Config:
    budget: int = 10 ** 6
    precision: int = 256
    lattice_bound: int = 1000
    collision_cap: int = 2048


@dataclass
class Decision:
    verdict: str
    witness: Optional[int]
    certificate: dict
    config: Config = field(default_factory=Config)

    def exit_code(self) -> int:
        if self.verdict in (POSITIVE, ULTIMATELY_POSITIVE):
            return 0
        if self.verdict in (NOT_POSITIVE, NOT_ULTIMATELY_POSITIVE):
            return 1
        return 2


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


# ---------------------------------------------------------------------------
# Per-subsequence analysis
# ---------------------------------------------------------------------------


@dataclass
class SubseqAnalysis:
    kind: str                     # zero | oscillating | up | not_up |
                                  # critical_up | unknown
    threshold: Optional[int] = None
    record: dict = field(default_factory=dict)
    dn: Optional[DominantNormalization] = None
    lattice: Optional[RelationLattice] = None
    mincert: Optional[MinCertificate] = None


def _sign_a_plus_mu(a: AlgebraicNumber, cert: MinCertificate) -> Optional[int]:
    """Exact sign of a + mu when available, certified interval sign else,
    None when undecided."""
    if cert.mu_is_exact:
        return cert.mu_exact.compare_real(-a)
    for prec in (96, 192, 384):
        abox = a.refine(prec).re
        lo = abox.lo.as_fraction() + cert.mu_lo
        hi = abox.hi.as_fraction() + cert.mu_hi
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    return None


def analyze_subsequence(sub: Lrs, config: Config) -> SubseqAnalysis:
    """Ultimate-positivity analysis of one non-degenerate subsequence."""
    dec = decompose(sub)
    dn = dominant_normalize(dec)
    if isinstance(dn, FilterOutcome):
        if dn.kind == "zero":
            return SubseqAnalysis("zero", 0, {"outcome": "zero"})
        return SubseqAnalysis("oscillating", None, {
            "outcome": "oscillating",
            "reason": "no real positive dominant characteristic root"})
    record: dict = {
        "rho_poly": list(dn.rho.defining_poly.coeffs),
        "a_poly": list(dn.a.defining_poly.coeffs),
        "m": dn.m,
        "residual_terms": len(dn.residual_terms),
    }
    a_sign = dn.a.sign_real()
    record["a_sign"] = a_sign
    if dn.m == 0:
        if not dn.has_residual:
            # u_n = a * rho^n exactly
            kind = "up" if a_sign > 0 else "not_up"
            record["outcome"] = kind
            return SubseqAnalysis(kind, 0 if a_sign > 0 else None,
                                  record, dn)
        tail = tail_bound(dn)
        record["tail_epsilon"] = _frac_str(tail.epsilon)
        record["tail_N"] = tail.N
        if a_sign > 0:
            a_lb = dn.a.refine(128).re.lo.as_fraction()
            thr = positivity_threshold(a_lb, tail)
            record["outcome"] = "up"
            record["threshold"] = thr
            return SubseqAnalysis("up", thr, record, dn)
        record["outcome"] = "not_up"
        record["reason"] = "negative dominant coefficient"
        return SubseqAnalysis("not_up", None, record, dn)
    # complex dominant pairs present
    lattice = compute_lattice(dn.lambdas, config.lattice_bound)
    record["lattice_basis"] = [list(r) for r in lattice.basis]
    record["lattice_exactness"] = lattice.exactness
    record["lattice_bound"] = lattice.bound
    h = TrigForm(dn.c)
    mincert = minimize_h(h, lattice, tol=Fraction(1, 1 << 10))
    s_rel = _sign_a_plus_mu(dn.a, mincert)
    if s_rel is None and not mincert.mu_is_exact:
        # coarse enclosure straddles: refine before giving up
        mincert = minimize_h(h, lattice, tol=Fraction(1, 10 ** 9))
        s_rel = _sign_a_plus_mu(dn.a, mincert)
    record["mu_lo"] = _frac_str(mincert.mu_lo)
    record["mu_hi"] = _frac_str(mincert.mu_hi)
    record["mu_exact"] = (list(mincert.mu_exact.defining_poly.coeffs)
                          if mincert.mu_is_exact else None)
    record["mu_status"] = mincert.status
    if s_rel is None:
        record["outcome"] = "unknown"
        record["reason"] = "sign of a + mu undecided (needs exact reduction)"
        return SubseqAnalysis("unknown", None, record, dn, lattice, mincert)
    record["a_plus_mu_sign"] = s_rel
    if not dn.has_residual:
        # u_n / rho^n = a + h(orbit): nonnegative minimum decides outright
        if s_rel >= 0:
            record["outcome"] = "up"
            record["threshold"] = 0
            return SubseqAnalysis("up", 0, record, dn, lattice, mincert)
        record["outcome"] = "not_up"
        record["reason"] = "a + min h < 0 with empty residual"
        return SubseqAnalysis("not_up", None, record, dn, lattice, mincert)
    tail = tail_bound(dn)
    record["tail_epsilon"] = _frac_str(tail.epsilon)
    record["tail_N"] = tail.N
    if s_rel > 0:
        if mincert.mu_is_exact:
            gap_lb = (dn.a.refine(128).re.lo.as_fraction()
                      + mincert.mu_exact.refine(128).re.lo.as_fraction())
        else:
            gap_lb = dn.a.refine(128).re.lo.as_fraction() + mincert.mu_lo
        thr = positivity_threshold(gap_lb, tail)
        record["outcome"] = "up"
        record["threshold"] = thr
        return SubseqAnalysis("up", thr, record, dn, lattice, mincert)
    if s_rel < 0:
        record["outcome"] = "not_up"
        record["reason"] = "a + min h < 0: orbit re-enters the negative region"
        return SubseqAnalysis("not_up", None, record, dn, lattice, mincert)
    # critical case: a + mu = 0 exactly
    return _analyze_critical(sub, dn, lattice, h, mincert, tail, record,
                             config)


def _analyze_critical(sub, dn, lattice, h, mincert, tail, record, config
                      ) -> SubseqAnalysis:
    record["critical"] = True
    fin_kind, fin_rank = check_finiteness(lattice, dn.m)
    record["finiteness"] = f"{fin_kind}({fin_rank})"
    if fin_kind != "finite_by_rank":
        record["outcome"] = "unknown"
        record["reason"] = "minimizer finiteness not covered at this rank"
        return SubseqAnalysis("unknown", None, record, dn, lattice, mincert)
    if not (mincert.mu_is_exact and mincert.finite and mincert.minimizers):
        record["outcome"] = "unknown"
        record["reason"] = "critical case needs the exact minimizer set"
        return SubseqAnalysis("unknown", None, record, dn, lattice, mincert)
    try:
        Z1 = minimizer_first_coords(mincert)
        lam1 = dn.lambdas[0]
        M, m_complete = collision_horizon(lam1, Z1, config.collision_cap)
        b = exclusion_radius(Z1)
        gapcert = gap_polynomial(
            h, lattice, mincert, b, lam=lam1, Z1=Z1,
            epsilon=tail.epsilon, collision_M=M,
            collision_complete=m_complete)
    except (ExactnessError, ValueError) as exc:
        record["outcome"] = "unknown"
        record["reason"] = f"critical-case machinery failed: {exc}"
        return SubseqAnalysis("unknown", None, record, dn, lattice, mincert)
    threshold = max(M, tail.N, gapcert.N_prime, 3)
    record["outcome"] = "critical_up"
    record["collision_M"] = M
    record["collision_complete"] = m_complete
    record["baker_D"] = gapcert.D_exponent
    record["gap_poly"] = list(gapcert.P.coeffs)
    record["N_prime"] = gapcert.N_prime
    record["threshold"] = threshold
    record["Z1_count"] = len(Z1)
    return SubseqAnalysis("critical_up", threshold, record, dn, lattice,
                          mincert)


# ---------------------------------------------------------------------------
# Witness search
# ---------------------------------------------------------------------------


def _scan_first_negative(s: Lrs, limit: int) -> Optional[int]:
    for n, u in enumerate(term_iter(s)):
        if n > limit:
            return None
        if u < 0:
            return n
    return None


def _scan_first_positive(s: Lrs, limit: int) -> Optional[int]:
    for n, u in enumerate(term_iter(s)):
        if n > limit:
            return None
        if u > 0:
            return n
    return None


def _guided_negative(sub: Lrs, analysis: SubseqAnalysis,
                     config: Config) -> Optional[int]:
    """Density-guided probe for a negative term in the a + mu < 0 regime."""
    mincert = analysis.mincert
    if (mincert is None or analysis.lattice is None
            or analysis.dn is None or not mincert.minimizers):
        return None
    dn = analysis.dn
    target = mincert.minimizers[0]
    for eps in (Fraction(1, 4), Fraction(1, 16), Fraction(1, 64)):
        try:
            n = density_search(list(dn.lambdas), analysis.lattice, target,
                               eps, min(config.budget, 10 ** 5))
        except (ValueError, ExactnessError):
            return None
        if n is None:
            continue
        for cand in range(max(0, n - 2), n + 3):
            if term_at_pow(sub, cand) < 0:
                return cand
    return None


# ---------------------------------------------------------------------------
# Top-level decisions
# ---------------------------------------------------------------------------


def _prepare(s: Lrs, config: Config):
    if s.order > MAX_ORDER:
        raise ValueError("order exceeds supported bound")
    if not is_simple(s):
        raise ValueError("repeated characteristic roots")
    if all(u == 0 for u in s.initial):
        return None  # identically zero
    roots = isolate_roots(char_poly(s))
    subs = partition_nondegenerate(s, roots)
    return subs


def _analysis_certificate(subs, analyses, ell) -> dict:
    return {
        "modulus": ell,
        "subsequences": [
            {"r": r, "recurrence": [str(b) for b in subs[r].recurrence],
             "initial": [str(u) for u in subs[r].initial],
             **{k: (str(v) if isinstance(v, int) and abs(v) > 2 ** 63 else v)
                for k, v in analyses[r].record.items()}}
            for r in range(ell)],
    }


def decide_positivity(s: Lrs, config: Config = Config()) -> Decision:
    """Are all terms nonnegative?  Certificates per the module contract."""
    t0 = time.time()
    subs = _prepare(s, config)
    if subs is None:
        return Decision(POSITIVE, None, {"trivial": "zero sequence"}, config)
    ell = len(subs)
    analyses = [analyze_subsequence(sub, config) for sub in subs]
    cert = _analysis_certificate(subs, analyses, ell)
    negatives_exist = any(a.kind in ("oscillating", "not_up")
                          for a in analyses)
    if negatives_exist:
        w = _scan_first_negative(s, config.budget)
        if w is None:
            for r, a in enumerate(analyses):
                if a.kind == "not_up":
                    g = _guided_negative(subs[r], a, config)
                    if g is not None:
                        w = ell * g + r
                        break
        if w is not None:
            assert term_at_pow(s, w) < 0
            cert["witness_recheck"] = "exact"
            cert["elapsed_s"] = round(time.time() - t0, 6)
            return Decision(NOT_POSITIVE, w, cert, config)
        cert["note"] = ("negative terms certified to exist, none found "
                        "within budget")
        cert["elapsed_s"] = round(time.time() - t0, 6)
        return Decision(UNKNOWN, None, cert, config)
    if any(a.kind == "unknown" for a in analyses):
        cert["elapsed_s"] = round(time.time() - t0, 6)
        return Decision(UNKNOWN, None, cert, config)
    # all subsequences ultimately positive: exhaustive segment
    conditional = False
    best_witness = None
    for r, (sub, a) in enumerate(zip(subs, analyses)):
        threshold = a.threshold or 0
        checked_to = min(threshold, config.budget)
        w = _scan_first_negative(sub, checked_to)
        a.record["exhaustive_checked_to"] = checked_to
        cert["subsequences"][r]["exhaustive_checked_to"] = checked_to
        if w is not None:
            mapped = ell * w + r
            if best_witness is None or mapped < best_witness:
                best_witness = mapped
        elif threshold > config.budget:
            conditional = True
            cert["subsequences"][r]["outstanding_threshold"] = str(threshold)
    if best_witness is not None:
        assert term_at_pow(s, best_witness) < 0
        cert["witness_recheck"] = "exact"
        cert["elapsed_s"] = round(time.time() - t0, 6)
        return Decision(NOT_POSITIVE, best_witness, cert, config)
    cert["elapsed_s"] = round(time.time() - t0, 6)
    if conditional:
        return Decision(POSITIVE_CONDITIONAL, None, cert, config)
    return Decision(POSITIVE, None, cert, config)


def decide_ultimate_positivity(s: Lrs, config: Config = Config()) -> Decision:
    """Are all but finitely many terms nonnegative?"""
    t0 = time.time()
    subs = _prepare(s, config)
    if subs is None:
        return Decision(ULTIMATELY_POSITIVE, None,
                        {"trivial": "zero sequence"}, config)
    ell = len(subs)
    analyses = [analyze_subsequence(sub, config) for sub in subs]
    cert = _analysis_certificate(subs, analyses, ell)
    if any(a.kind in ("oscillating", "not_up") for a in analyses):
        w = _scan_first_negative(s, config.budget)
        if w is None:
            for r, a in enumerate(analyses):
                if a.kind == "not_up":
                    g = _guided_negative(subs[r], a, config)
                    if g is not None:
                        w = ell * g + r
                        break
        if w is not None:
            assert term_at_pow(s, w) < 0
            cert["witness_recheck"] = "exact"
        else:
            cert["note"] = "witness not found within budget"
        cert["elapsed_s"] = round(time.time() - t0, 6)
        return Decision(NOT_ULTIMATELY_POSITIVE, w, cert, config)
    if any(a.kind == "unknown" for a in analyses):
        cert["elapsed_s"] = round(time.time() - t0, 6)
        return Decision(UNKNOWN, None, cert, config)
    thresholds = [ell * (a.threshold or 0) + r
                  for r, a in enumerate(analyses)]
    cert["threshold"] = str(max(thresholds)) if thresholds else "0"
    cert["elapsed_s"] = round(time.time() - t0, 6)
    return Decision(ULTIMATELY_POSITIVE, None, cert, config)


# ---------------------------------------------------------------------------
# Certificate verification
# ---------------------------------------------------------------------------


def verify_certificate(s: Lrs, d: Decision) -> bool:
    """Independent recheck of every checkable claim in a decision."""
    try:
        if d.verdict == NOT_POSITIVE:
            if d.witness is None:
                return False
            if term_at(s, d.witness) >= 0:   # linear iteration, not powering
                return False
        if d.verdict == NOT_ULTIMATELY_POSITIVE and d.witness is not None:
            if term_at(s, d.witness) >= 0:
                return False
        if d.verdict in (POSITIVE, POSITIVE_CONDITIONAL) \
                and "trivial" not in d.certificate:
            subs_info = d.certificate.get("subsequences", [])
            ell = d.certificate.get("modulus", 1)
            if ell < 1 or not subs_info:
                return False
            for info in subs_info:
                rec = tuple(int(x) for x in info["recurrence"])
                init = tuple(int(x) for x in info["initial"])
                sub = Lrs(rec, init)
                checked_to = info.get("exhaustive_checked_to")
                if checked_to is None:
                    return False
                thr = info.get("threshold", 0)
                thr = int(thr) if thr is not None else 0
                if d.verdict == POSITIVE and checked_to < min(
                        thr, d.config.budget):
                    return False
                if d.verdict == POSITIVE and thr > d.config.budget:
                    return False
                limit = min(int(checked_to), d.config.budget)
                for n, u in enumerate(term_iter(sub)):
                    if n > limit:
                        break
                    if u < 0:
                        return False
        # cross-check the pipeline itself
        redo = (decide_positivity(s, d.config)
                if d.verdict in (POSITIVE, NOT_POSITIVE, POSITIVE_CONDITIONAL)
                else decide_ultimate_positivity(s, d.config))
        if redo.verdict != d.verdict:
            return False
        return True
    except (ValueError, ExactnessError, KeyError):
        return False
