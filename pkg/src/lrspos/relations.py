"""Multiplicative relations among unit-modulus algebraic numbers.

The lattice L = {v in Z^m : lam_1^v1 ... lam_m^vm = 1} is found by lattice
reduction on high-precision argument vectors; every candidate relation is
then verified exactly, so the reported basis never contains a false
relation.  Completeness is explicit: a certificate is tagged `complete`
only in the cases where that is provable here (a single number, or a
full-rank lattice); otherwise it is `complete_up_to_bound(B)`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import sympy
from sympy.polys.matrices import DomainMatrix
from sympy import ZZ

from .algebraic import (AlgebraicNumber, ExactnessError, NumberFieldElement,
                        is_root_of_unity)
from .intervals import BoxIv, pi_iv
from .lrs import _angle_interval

_RELATION_DEGREE_CAP = 64


@dataclass(frozen=True)
class RelationLattice:
    """Verified basis of (a sublattice of) the multiplicative relations."""

    m: int
    basis: tuple          # tuple of integer tuples, HNF-reduced
    exactness: str        # "complete" or "complete_up_to_bound"
    bound: int

    @property
    def rank(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class TorusPoint:
    """A point of the relation torus, coordinates exact and unit-modulus."""

    coordinates: tuple


# ---------------------------------------------------------------------------
# Exact relation verification
# ---------------------------------------------------------------------------


def _power_as_algebraic(lam: AlgebraicNumber, e: int) -> AlgebraicNumber:
    return NumberFieldElement.generator(lam).pow(e).to_algebraic()


def verify_relation(lambdas: Sequence[AlgebraicNumber],
                    v: Sequence[int]) -> Optional[bool]:
    """Exact truth of lam_1^v1 ... lam_m^vm == 1.

    Returns True/False when decided exactly; None when the exact product
    would exceed the degree cap (the candidate is then discarded and the
    lattice stays tagged as bounded-completeness).
    """
    nz = [(lam, int(e)) for lam, e in zip(lambdas, v) if e]
    if not nz:
        return True
    # certified numeric refutation
    for prec in (128, 512, 2048):
        prod = BoxIv.point(1)
        for lam, e in nz:
            prod = (prod * lam.refine(prec).pow(e, prec)).rounded(prec)
        if not prod.contains_point(Fraction(1), Fraction(0)):
            return False
    if len(nz) == 1:
        lam, e = nz[0]
        order = is_root_of_unity(lam)
        return order is not None and e % order == 0
    if len(nz) == 2:
        (la, ea), (lb, eb) = nz
        try:
            return _power_as_algebraic(la, ea) == _power_as_algebraic(lb, -eb)
        except ExactnessError:
            return None
    # split into numerator and denominator sides, multiply with a degree cap
    try:
        lhs = _product_side([(lam, e) for lam, e in nz if e > 0])
        rhs = _product_side([(lam, -e) for lam, e in nz if e < 0])
        return lhs == rhs
    except ExactnessError:
        return None


def _product_side(factors: list) -> AlgebraicNumber:
    acc = AlgebraicNumber.from_rational(1)
    for lam, e in factors:
        term = _power_as_algebraic(lam, e)
        acc = acc * term
        if acc.degree > _RELATION_DEGREE_CAP:
            raise ExactnessError("relation product degree cap exceeded")
    return acc


# ---------------------------------------------------------------------------
# Lattice computation
# ---------------------------------------------------------------------------


def _lll_candidates(lambdas, prec: int, bound: int) -> list:
    """Candidate relation vectors from LLL on scaled argument rows."""
    m = len(lambdas)
    args = []
    for lam in lambdas:
        iv = _angle_interval(lam, prec)
        if iv is None:
            return []
        args.append(iv)
    twopi = pi_iv(prec).mul_int(2)
    scale = 1 << (prec - 16)
    rows = []
    weight = 1 << 12
    for i, iv in enumerate(args):
        row = [0] * (m + 1) + [int(iv.mid().as_fraction() * scale)]
        row[i] = weight
        rows.append(row)
    rows.append([0] * m + [weight] + [int(twopi.mid().as_fraction() * scale)])
    M = DomainMatrix([[ZZ(c) for c in row] for row in rows],
                     (m + 1, m + 2), ZZ)
    try:
        red = M.lll()
    except Exception:
        return []
    cands = []
    for row in red.to_Matrix().tolist():
        v = [int(c) // weight for c in row[:m]]
        if all(c == 0 for c in v):
            continue
        if max(abs(c) for c in v) > bound:
            continue
        g = 0
        for c in v:
            g = gcd(g, abs(c))
        v = tuple(c // g for c in v)
        if v not in cands and tuple(-c for c in v) not in cands:
            cands.append(v)
    return cands


def _hnf_rows(vectors: list, m: int) -> tuple:
    """Row-style Hermite normal form of the lattice spanned by `vectors`."""
    if not vectors:
        return ()
    M = sympy.Matrix([list(v) for v in vectors])
    try:
        from sympy.matrices.normalforms import hermite_normal_form
        # hermite_normal_form works column-wise on full-column-rank input;
        # transpose juggling keeps row convention
        H = hermite_normal_form(M.T).T
        rows = [tuple(int(c) for c in H.row(i)) for i in range(H.rows)]
    except Exception:
        rows = [tuple(int(c) for c in M.row(i)) for i in range(M.rows)]
    rows = [r for r in rows if any(r)]
    # canonical sign: first nonzero entry positive
    out = []
    for r in rows:
        lead = next(c for c in r if c)
        out.append(tuple(-c for c in r) if lead < 0 else r)
    out.sort()
    return tuple(out)


def compute_lattice(lambdas: Sequence[AlgebraicNumber],
                    bound: int = 1000) -> RelationLattice:
    """Verified basis of the relation lattice, up to exponent bound."""
    lambdas = list(lambdas)
    m = len(lambdas)
    for lam in lambdas:
        if not lam.is_unit_modulus():
            raise ValueError("non-unit-modulus input")
    if m == 0:
        return RelationLattice(0, (), "complete", bound)
    verified: list = []
    # torsion coordinates give exact one-coordinate relations
    for i, lam in enumerate(lambdas):
        order = is_root_of_unity(lam)
        if order is not None:
            v = [0] * m
            v[i] = order
            verified.append(tuple(v))
    if m == 1:
        basis = _hnf_rows(verified, m)
        return RelationLattice(m, basis, "complete", bound)
    prev_sig = None
    for prec in (128, 256, 512, 1024, 2048, 4096):
        for cand in _lll_candidates(lambdas, prec, bound):
            known = _in_span(verified, cand, m)
            if known:
                continue
            res = verify_relation(lambdas, cand)
            if res:
                verified.append(cand)
        sig = _hnf_rows(verified, m)
        if sig == prev_sig:
            break
        prev_sig = sig
    basis = _hnf_rows(verified, m)
    for row in basis:
        assert verify_relation(lambdas, row), "basis row failed verification"
    # only the single-number case is provably complete here (exact torsion
    # order); a full-rank sublattice can still have finite index in L
    return RelationLattice(m, basis, "complete_up_to_bound", bound)


def _in_span(vectors: list, cand, m: int) -> bool:
    """Is cand in the rational span of the verified vectors?  (Cheap filter:
    membership in the lattice itself is re-certified by HNF later.)"""
    if not vectors:
        return False
    A = sympy.Matrix([list(v) for v in vectors]).T
    b = sympy.Matrix(list(cand))
    try:
        sol, params = A.gauss_jordan_solve(b)
        if params:
            return False
        return all(x.is_Integer for x in sol)
    except ValueError:
        return False


# ---------------------------------------------------------------------------
# Orbit and density search
# ---------------------------------------------------------------------------


def orbit_point(lambdas: Sequence[AlgebraicNumber], n: int,
                lattice: Optional[RelationLattice] = None) -> TorusPoint:
    """Exact (lam_1^n, ..., lam_m^n); membership in the torus is asserted."""
    if n < 0:
        raise ValueError("negative index")
    coords = tuple(_power_as_algebraic(lam, n) for lam in lambdas)
    if lattice is not None:
        for row in lattice.basis:
            prod = BoxIv.point(1)
            for z, e in zip(coords, row):
                if e:
                    prod = (prod * z.refine(192).pow(e, 192)).rounded(192)
            assert prod.contains_point(Fraction(1), Fraction(0)), \
                "orbit point violates a verified relation"
    return TorusPoint(coords)


def point_in_torus(point: TorusPoint, lattice: RelationLattice) -> bool:
    """Exact membership of an explicit point in the relation torus."""
    for row in lattice.basis:
        res = verify_relation(point.coordinates, row)
        if res is None:
            raise ExactnessError("torus membership check exceeded caps")
        if not res:
            return False
    return True


def density_search(lambdas: Sequence[AlgebraicNumber],
                   lattice: RelationLattice,
                   target: TorusPoint,
                   epsilon: Fraction,
                   budget: int) -> Optional[int]:
    """Least n <= budget with max_j |lam_j^n - target_j| <= epsilon.

    Distances are certified by interval arithmetic; ambiguous steps are
    re-checked at higher precision from exact powers.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if not point_in_torus(target, lattice):
        raise ValueError("target violates lattice relations")
    m = len(lambdas)
    eps_sq = Fraction(epsilon) ** 2
    prec = 192
    lam_boxes = [lam.refine(prec) for lam in lambdas]
    tgt_boxes = [t.refine(prec) for t in target.coordinates]
    cur = [BoxIv.point(1) for _ in range(m)]
    for n in range(budget + 1):
        verdict = _within(cur, tgt_boxes, eps_sq)
        if verdict is None:
            # recompute this step from exact powers at higher precision
            verdict = _within_exact(lambdas, target, n, eps_sq)
        if verdict:
            return n
        for j in range(m):
            cur[j] = (cur[j] * lam_boxes[j]).rounded(prec)
    return None


def _within(cur, tgt, eps_sq: Fraction) -> Optional[bool]:
    decided_yes = True
    for c, t in zip(cur, tgt):
        d = c.distance_sq(t)
        if d.lo.as_fraction() > eps_sq:
            return False
        if not (d.hi.as_fraction() <= eps_sq):
            decided_yes = False
    return True if decided_yes else None


def _within_exact(lambdas, target, n: int, eps_sq: Fraction) -> bool:
    for prec in (512, 2048):
        ok = True
        for lam, t in zip(lambdas, target.coordinates):
            zn = _power_as_algebraic(lam, n)
            d = zn.refine(prec).distance_sq(t.refine(prec))
            if d.lo.as_fraction() > eps_sq:
                return False
            if not (d.hi.as_fraction() <= eps_sq):
                ok = False
        if ok:
            return True
    # exact tie: compare |lam^n - t|^2 with eps^2 algebraically
    for lam, t in zip(lambdas, target.coordinates):
        diff = _power_as_algebraic(lam, n) - t
        dist_sq = diff.modulus_sq()
        if dist_sq.compare_real(AlgebraicNumber.from_rational(eps_sq)) > 0:
            return False
    return True
