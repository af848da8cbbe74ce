"""Minimization of h(z) = sum_j (c_j z_j + conj) over the relation torus.

The torus is parametrized branch by branch: a full-rank column minor of the
relation basis is diagonalized (via the adjugate), turning the constraints
into exact affine expressions of the free angles.  Depending on the lattice
rank the minimum is computed exactly (finite enumeration, or a univariate
reduction whose critical points are isolated algebraically) or enclosed by
certified branch-and-bound.  The critical-case machinery (exclusion radius,
unit-circle gap bounds from linear forms in logarithms, the inverse
polynomial floor of the constrained minimum) lives here as well.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Optional, Sequence, Union

import sympy

from .algebraic import (AlgebraicNumber, ExactnessError, NumberFieldElement,
                        _locate, isolate_roots, is_root_of_unity,
                        root_of_unity)
from .intervals import (BoxIv, Dyadic, RIv, cos_iv, ln_iv, pi_iv, sin_iv,
                        two_pi_iv)
from .lrs import _angle_interval
from .polynomials import IntPolynomial
from .relations import RelationLattice, TorusPoint, verify_relation

_x = sympy.Symbol("x")
_w = sympy.Symbol("w")

_H_DEGREE_CAP = 64


# ---------------------------------------------------------------------------
# The trigonometric form
# ---------------------------------------------------------------------------


class TrigForm:
    """h(z_1..z_m) = sum_j (c_j z_j + conj(c_j z_j)), all c_j nonzero."""

    def __init__(self, coeffs: Sequence[AlgebraicNumber]):
        cs = tuple(coeffs)
        if any(c.is_zero for c in cs):
            raise ValueError("zero coefficient; drop it upstream")
        self.coeffs = cs
        self.m = len(cs)
        self._shadow_cache: dict = {}

    def shadows(self, prec: int) -> list:
        """(Re c_j, Im c_j) certified intervals."""
        if prec not in self._shadow_cache:
            self._shadow_cache[prec] = [
                (c.refine(prec).re, c.refine(prec).im) for c in self.coeffs]
        return self._shadow_cache[prec]

    def eval_angles(self, xs: Sequence[RIv], prec: int) -> RIv:
        """h at z_j = exp(i x_j):  sum 2(Re c_j cos x_j - Im c_j sin x_j)."""
        total = RIv.point(0)
        for (cre, cim), x in zip(self.shadows(prec), xs):
            term = cre * cos_iv(x, prec) - cim * sin_iv(x, prec)
            total = (total + term.mul_int(2)).rounded(prec + 16)
        return total

    def eval_point_boxes(self, zs: Sequence[BoxIv], prec: int) -> RIv:
        total = RIv.point(0)
        for c, z in zip(self.coeffs, zs):
            total = total + (c.refine(prec) * z).re.mul_int(2)
        return total

    def value_at_exact(self, zs: Sequence[AlgebraicNumber]) -> AlgebraicNumber:
        """Exact h value at an exact torus point (degree-capped)."""
        acc = AlgebraicNumber.from_rational(0)
        for c, z in zip(self.coeffs, zs):
            t = c * z
            term = t + t.conj()
            acc = acc + term
            if acc.degree > _H_DEGREE_CAP:
                raise ExactnessError("exact h evaluation exceeded degree cap")
        return acc


# ---------------------------------------------------------------------------
# Branch parametrization of the torus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    """Affine chart: x_j = 2*pi*offset_j + sum_l weight_jl * y_l."""

    offsets: tuple          # Fraction per coordinate
    weights: tuple          # per coordinate, tuple of Fractions over free dims
    free_dim: int
    # exact reduction data (present when built from a diagonalized minor)
    dep_cols: tuple = ()
    free_cols: tuple = ()
    det: int = 1
    c_matrix: tuple = ()    # adj(A) * F rows, one per dependent coordinate
    pvec: tuple = ()


def _branches(basis: Sequence[Sequence[int]], m: int,
              branch_cap: int = 20000) -> list:
    """Affine charts covering the torus cut out by the relation basis."""
    p = len(basis)
    if p == 0:
        ident = tuple(tuple(Fraction(1) if l == j else Fraction(0)
                            for l in range(m)) for j in range(m))
        return [Branch(tuple(Fraction(0) for _ in range(m)), ident, m)]
    B = sympy.Matrix([list(r) for r in basis])
    dep = None
    for cols in itertools.combinations(range(m), p):
        A = B[:, list(cols)]
        if A.det() != 0:
            dep = cols
            break
    if dep is None:
        raise ValueError("relation basis is not of full row rank")
    free = tuple(j for j in range(m) if j not in dep)
    A = B[:, list(dep)]
    det = int(A.det())
    adj = A.adjugate()      # adj * A == det * I
    F = B[:, list(free)]
    C = adj * F             # p x (m-p), integer
    qranges = [range(-sum(abs(int(c)) for c in B.row(i)),
                     sum(abs(int(c)) for c in B.row(i)) + 1)
               for i in range(p)]
    total = 1
    for r in qranges:
        total *= len(r)
    if total > branch_cap:
        raise ExactnessError("branch enumeration too large")
    seen = {}
    for q in itertools.product(*qranges):
        pv = adj * sympy.Matrix(list(q))
        pvec = tuple(int(v) for v in pv)
        key = tuple(v % det for v in pvec) if det > 0 else \
            tuple(v % -det for v in pvec)
        if key in seen:
            continue
        offsets = [Fraction(0)] * m
        weights = [[Fraction(0)] * len(free) for _ in range(m)]
        for i, j in enumerate(dep):
            offsets[j] = Fraction(pvec[i], det)
            for l in range(len(free)):
                weights[j][l] = Fraction(-int(C[i, l]), det)
        for l, j in enumerate(free):
            weights[j][l] = Fraction(1)
        seen[key] = Branch(tuple(offsets),
                           tuple(tuple(wr) for wr in weights),
                           len(free), dep, free, det,
                           tuple(tuple(int(C[i, l]) for l in range(len(free)))
                                 for i in range(p)),
                           pvec)
    return list(seen.values())


def _riv_scale(iv: RIv, fr: Fraction, prec: int) -> RIv:
    if fr == 0:
        return RIv.point(0)
    return (iv * RIv.from_fraction(fr, prec)).rounded(prec)


def _branch_angles(branch: Branch, ys: Sequence[RIv], prec: int) -> list:
    twopi = two_pi_iv(prec)
    xs = []
    for j in range(len(branch.offsets)):
        x = _riv_scale(twopi, branch.offsets[j], prec)
        for l, yiv in enumerate(ys):
            wgt = branch.weights[j][l]
            if wgt:
                x = x + _riv_scale(yiv, wgt, prec)
        xs.append(x)
    return xs


# ---------------------------------------------------------------------------
# Certified branch-and-bound
# ---------------------------------------------------------------------------


def _bnb_minimize(h: TrigForm, branches: Sequence[Branch],
                  tol: Fraction,
                  feasible: Optional[Callable] = None,
                  prec: int = 96,
                  max_nodes: int = 200000) -> tuple:
    """Certified enclosure (lo, hi) of min h over the union of branches.

    `feasible(branch, xs, prec)` may return False to prune a whole box
    (used for the excluded-disc constraint of the gap function).
    """
    best_ub: Optional[Fraction] = None
    point_lb: Optional[Fraction] = None

    # zero-dimensional branches: single points, refine directly
    for br in branches:
        if br.free_dim:
            continue
        p2 = prec
        while True:
            xs = _branch_angles(br, [], p2)
            if feasible is not None and not feasible(br, xs, p2):
                break
            iv = h.eval_angles(xs, p2)
            if iv.width.as_fraction() <= tol / 2 or p2 > 16 * prec:
                lo, hi = iv.lo.as_fraction(), iv.hi.as_fraction()
                point_lb = lo if point_lb is None else min(point_lb, lo)
                best_ub = hi if best_ub is None else min(best_ub, hi)
                break
            p2 *= 2

    heap: list = []
    counter = itertools.count()

    def push(bi: int, box: list):
        nonlocal best_ub
        branch = branches[bi]
        xs = _branch_angles(branch, box, prec)
        if feasible is not None and not feasible(branch, xs, prec):
            return
        lb = h.eval_angles(xs, prec).lo.as_fraction()
        # midpoint gives a certified upper bound; with a feasibility hook
        # only use it when the hook accepts the thin box
        mid = [RIv.point(b.mid()) for b in box]
        xm = _branch_angles(branch, mid, prec)
        if feasible is None or feasible(branch, xm, prec):
            ub = h.eval_angles(xm, prec).hi.as_fraction()
            if best_ub is None or ub < best_ub:
                best_ub = ub
        if best_ub is not None and lb > best_ub:
            return
        heapq.heappush(heap, (lb, next(counter), bi, box))

    full = RIv(Dyadic(0), two_pi_iv(prec).hi)
    for bi, br in enumerate(branches):
        if br.free_dim:
            push(bi, [full] * br.free_dim)
    nodes = 0
    while heap:
        lb, _, bi, box = heapq.heappop(heap)
        glb = lb if point_lb is None else min(lb, point_lb)
        if best_ub is not None and best_ub - glb <= tol:
            return (glb, best_ub)
        nodes += 1
        if nodes > max_nodes:
            raise ExactnessError("branch-and-bound node budget exhausted")
        widest = max(range(len(box)), key=lambda i: box[i].width)
        mid = box[widest].mid()
        left, right = list(box), list(box)
        left[widest] = RIv(box[widest].lo, mid)
        right[widest] = RIv(mid, box[widest].hi)
        push(bi, left)
        push(bi, right)
    if best_ub is None:
        raise ExactnessError("no feasible point found")
    return (point_lb if point_lb is not None else best_ub, best_ub)


# ---------------------------------------------------------------------------
# Exact reductions
# ---------------------------------------------------------------------------


def _sqrt_positive(a: AlgebraicNumber) -> AlgebraicNumber:
    """Positive square root of a positive real algebraic number."""
    if a.is_rational:
        r = a.as_rational()
        num, den = r.numerator, r.denominator
        from math import isqrt
        ni, di = isqrt(num), isqrt(den)
        if ni * ni == num and di * di == den:
            return AlgebraicNumber.from_rational(Fraction(ni, di))
    p = a.defining_poly
    stretched = p.compose_power(2)  # q(x) = p(x^2)
    cands = [f for f, _ in stretched.factor_irreducible()]

    def approx(prec: int) -> BoxIv:
        box = a.refine(prec)
        lo = max(box.re.lo, Dyadic(0))
        return BoxIv(RIv(lo, box.re.hi).sqrt(prec), RIv.point(0))

    return _locate(cands, approx)


def _gaussian_parts(a: AlgebraicNumber) -> Optional[tuple]:
    """(re, im) as Fractions when a is a complex rational, else None."""
    if a.is_rational:
        return (a.as_rational(), Fraction(0))
    if a.degree != 2:
        return None
    re = a.re_part()
    im = a.im_part()
    if re.is_rational and im.is_rational:
        return (re.as_rational(), im.as_rational())
    return None


def _quarter_unit(offset: Fraction) -> Optional[tuple]:
    """exp(2*pi*i*offset) as (re, im) Fractions when offset has den | 4."""
    off = offset - offset.__floor__()
    if off.denominator == 1:
        return (Fraction(1), Fraction(0))
    if off.denominator == 2:
        return (Fraction(-1), Fraction(0))
    if off.denominator == 4:
        return (Fraction(0), Fraction(1)) if off.numerator % 4 == 1 \
            else (Fraction(0), Fraction(-1))
    return None


def _g_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _g_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _g_conj(a):
    return (a[0], -a[1])


def _g_scale(a, s: Fraction):
    return (a[0] * s, a[1] * s)


def _exact_point_for_branch(branch: Branch) -> list:
    """Exact coordinates of a zero-dimensional branch (roots of unity)."""
    coords = []
    for off in branch.offsets:
        coords.append(root_of_unity(off.numerator % off.denominator
                                    if off.denominator > 0 else 0,
                                    off.denominator))
    return coords


def _rank0_exact(h: TrigForm) -> tuple:
    """(mu, minimizer) for the unconstrained torus."""
    mu = AlgebraicNumber.from_rational(0)
    coords = []
    for c in h.coeffs:
        mod = _sqrt_positive(c.modulus_sq())
        mu = mu - (mod + mod)
        if mu.degree > _H_DEGREE_CAP:
            raise ExactnessError("rank-0 modulus sum exceeded degree cap")
        coords.append(-(c.conj() * mod.inv()))
    return mu, [TorusPoint(tuple(coords))]


def _rank_m_exact(h: TrigForm, branches: Sequence[Branch]) -> tuple:
    """(mu, minimizers) over a finite torus."""
    values = []
    for br in branches:
        coords = _exact_point_for_branch(br)
        values.append((h.value_at_exact(coords), TorusPoint(tuple(coords))))
    mu = values[0][0]
    for v, _ in values[1:]:
        if v.compare_real(mu) < 0:
            mu = v
    minimizers = [pt for v, pt in values if v.compare_real(mu) == 0]
    return mu, minimizers


def _laurent_alphas(h: TrigForm, branch: Branch) -> Optional[dict]:
    """Exponent -> Gaussian-rational alpha for a one-free-variable branch.

    Requires every coefficient and every offset phase to be a complex
    rational; returns None otherwise.
    """
    alphas: dict = {}
    for j, c in enumerate(h.coeffs):
        g = _gaussian_parts(c)
        if g is None:
            return None
        zeta = _quarter_unit(branch.offsets[j])
        if zeta is None:
            return None
        alpha = _g_mul(_g_scale(g, Fraction(2)), zeta)
        if j in branch.free_cols:
            K = branch.det
        else:
            i = branch.dep_cols.index(j)
            K = -branch.c_matrix[i][0]
        if K in alphas:
            alphas[K] = _g_add(alphas[K], alpha)
        else:
            alphas[K] = alpha
    return alphas


def _real_laurent_value(alphas: dict, w0: AlgebraicNumber) -> AlgebraicNumber:
    """Exact value of Re(sum alpha_K w0^K) for |w0| = 1."""
    # symmetrize: T = 1/2 (A(w) + conj-A(1/w)) is real on the circle
    t: dict = {}
    for K, a in alphas.items():
        t[K] = _g_add(t.get(K, (Fraction(0), Fraction(0))), _g_scale(a, Fraction(1, 2)))
        t[-K] = _g_add(t.get(-K, (Fraction(0), Fraction(0))),
                       _g_scale(_g_conj(a), Fraction(1, 2)))
    S = max(abs(k) for k in t)
    den = 1
    for re, im in t.values():
        den = lcm(den, lcm(re.denominator, im.denominator))
    # U(w) = sum D t_K w^(K+S);  value = U(w0) / (D w0^S)
    U = sympy.Integer(0)
    for K, (re, im) in t.items():
        U += (int(re * den) + int(im * den) * sympy.I) * _w ** (K + S)
    q = w0.defining_poly.to_sympy().as_expr().subs(_x, _w)
    res = sympy.resultant(q, sympy.expand(den * _x * _w ** S - U), _w)
    res_conj = res.subs(sympy.I, -sympy.I)
    rp = sympy.Poly(sympy.expand(res * res_conj), _x)
    cands = [f for f, _ in
             IntPolynomial.from_sympy(rp).primitive().factor_irreducible()]

    def approx(prec: int) -> BoxIv:
        wb = w0.refine(prec)
        acc = BoxIv.point(0)
        for K, (re, im) in t.items():
            coeff = BoxIv.from_fractions(re, im, prec)
            acc = acc + (coeff * wb.pow(K, prec)).rounded(prec)
        return acc

    return _locate(cands, approx)


def _rank_m1_exact(h: TrigForm, branches: Sequence[Branch]) -> tuple:
    """(mu, minimizers, finite) via the univariate reduction."""
    best = None
    best_pts: list = []
    finite = True
    for br in branches:
        alphas = _laurent_alphas(h, br)
        if alphas is None:
            raise ExactnessError("branch data is not complex-rational")
        # derivative Laurent polynomial: E(w) = sum aK K w^(K+S) - conj ...
        S = max(abs(k) for k in alphas)
        den = 1
        for re, im in alphas.values():
            den = lcm(den, lcm(re.denominator, im.denominator))
        g_re = [0] * (2 * S + 1)
        g_im = [0] * (2 * S + 1)
        for K, (re, im) in alphas.items():
            if K == 0:
                continue
            g_re[K + S] += int(re * den) * K
            g_im[K + S] += int(im * den) * K
            g_re[S - K] -= int(re * den) * K
            g_im[S - K] += int(im * den) * K
        gre = IntPolynomial(g_re)
        gim = IntPolynomial(g_im)
        if gre.is_zero and gim.is_zero:
            # constant branch: value Re A(1) = sum Re(alpha)
            val = AlgebraicNumber.from_rational(
                sum(a[0] for a in alphas.values()))
            pts = None  # a whole circle of minimizers
            if best is None or val.compare_real(best) < 0:
                best, best_pts, finite = val, [], False
            elif val.compare_real(best) == 0:
                finite = False
            continue
        pz = gre * gre + gim * gim
        circle_roots = [r for r in isolate_roots(pz) if r.is_unit_modulus()]
        if not circle_roots:
            raise AssertionError("non-constant branch without critical points")
        for w0 in circle_roots:
            val = _real_laurent_value(alphas, w0)
            if best is None or val.compare_real(best) < 0:
                best = val
                best_pts = [(br, w0)]
            elif val.compare_real(best) == 0:
                best_pts.append((br, w0))
    minimizers = None
    if finite:
        minimizers = [TorusPoint(tuple(_branch_point_coords(br, w0)))
                      for br, w0 in best_pts]
    return best, minimizers, finite


def _branch_point_coords(branch: Branch, w0: AlgebraicNumber) -> list:
    coords: list = [None] * len(branch.offsets)
    for l, j in enumerate(branch.free_cols):
        coords[j] = w0.pow_int(branch.det)
    for i, j in enumerate(branch.dep_cols):
        zeta = _quarter_unit(branch.offsets[j])
        base = w0.pow_int(-branch.c_matrix[i][0])
        coords[j] = AlgebraicNumber.from_gaussian(*zeta) * base
    return coords


# ---------------------------------------------------------------------------
# Minimization certificate
# ---------------------------------------------------------------------------


@dataclass
class MinCertificate:
    """Result of minimizing h over the relation torus."""

    m: int
    rank: int
    mu_exact: Optional[AlgebraicNumber]
    mu_lo: Fraction
    mu_hi: Fraction
    finite: Optional[bool]          # minimizing set finiteness
    finiteness_tag: str             # "rank0" | "rank1" | "rank_m_minus_1" |
                                    # "rank_m" | "unknown"
    minimizers: Optional[tuple]     # TorusPoints when finite and computed
    status: str                     # "exact" | "enclosure" |
                                    # "needs_exact_reduction"
    exclusion_radius: Optional[object] = None

    @property
    def mu_is_exact(self) -> bool:
        return self.mu_exact is not None


def check_finiteness(lattice: RelationLattice, m: int) -> tuple:
    """("finite_by_rank", p) when covered, else ("not_covered", p)."""
    p = lattice.rank
    if p in (0, 1, m - 1, m):
        return ("finite_by_rank", p)
    return ("not_covered", p)


def _finite_tag(p: int, m: int) -> str:
    if p == 0:
        return "rank0"
    if p == m:
        return "rank_m"
    if p == m - 1:
        return "rank_m_minus_1"
    if p == 1:
        return "rank1"
    return "unknown"


def minimize_h(h: TrigForm, lattice: RelationLattice,
               tol: Fraction = Fraction(1, 10 ** 8)) -> MinCertificate:
    """Certified minimum of h over the torus of the lattice."""
    m = h.m
    if lattice.m != m:
        raise ValueError("inconsistent dimensions")
    p = lattice.rank
    finite_known = p in (0, 1, m - 1, m)
    tag = _finite_tag(p, m)
    try:
        branches = _branches(lattice.basis, m)
    except ExactnessError:
        lo, hi = _trivial_bounds(h)
        return MinCertificate(m, p, None, lo, hi, None, "unknown", None,
                              "needs_exact_reduction")
    mu = None
    minimizers = None
    finite: Optional[bool] = finite_known or None
    if not finite_known:
        finite = None
    try:
        if p == 0:
            mu, minimizers = _rank0_exact(h)
        elif p == m:
            mu, minimizers = _rank_m_exact(h, branches)
        elif p == m - 1:
            mu, minimizers, fin = _rank_m1_exact(h, branches)
            finite = fin
    except ExactnessError:
        mu = None
        minimizers = None
    if mu is not None:
        box = mu.refine(80)
        return MinCertificate(m, p, mu, box.re.lo.as_fraction(),
                              box.re.hi.as_fraction(), finite, tag,
                              tuple(minimizers) if minimizers else None,
                              "exact")
    lo, hi = _bnb_minimize(h, branches, tol)
    return MinCertificate(m, p, None, lo, hi,
                          True if finite_known else None,
                          tag if finite_known else "unknown",
                          None, "enclosure")


def _trivial_bounds(h: TrigForm) -> tuple:
    bound = Fraction(0)
    for c in h.coeffs:
        msq = c.refine(64).modulus_sq().hi.as_fraction()
        from math import isqrt
        ub = Fraction(isqrt(int(msq * 2 ** 64)) + 1, 2 ** 32)
        bound += 2 * ub
    return (-bound, bound)


def minimizer_first_coords(cert: MinCertificate) -> list:
    """Exact first coordinates of all minimizers."""
    if not cert.finite:
        raise ValueError("Z possibly infinite")
    if cert.minimizers is None:
        raise ValueError("minimizers unavailable (enclosure-only result)")
    out: list = []
    for pt in cert.minimizers:
        z1 = pt.coordinates[0]
        if not any(z1 == z for z in out):
            out.append(z1)
    for z in out:
        assert z.is_unit_modulus()
    return out


# ---------------------------------------------------------------------------
# Exclusion radius
# ---------------------------------------------------------------------------


def _sorted_by_angle(points: list) -> list:
    keyed = []
    for zt in points:
        prec = 96
        while True:
            iv = _angle_interval(zt, prec)
            if iv is not None:
                # normalize representative into [0, 2pi)
                twopi = pi_iv(prec).mul_int(2)
                val = iv
                while val.lo.sign < 0:
                    val = val + twopi
                while val.lo >= twopi.hi:
                    val = val - twopi
                keyed.append((val, zt))
                break
            prec *= 2
    # refine until strict separation (points are distinct)
    prec = 192
    while True:
        ok = True
        vals = []
        for iv, zt in keyed:
            vals.append((iv, zt))
        vals.sort(key=lambda t: t[0].lo.as_fraction())
        for i in range(len(vals) - 1):
            if not vals[i][0].disjoint(vals[i + 1][0]):
                ok = False
                break
        if ok:
            return [zt for _, zt in vals]
        prec *= 2
        keyed = []
        for zt in points:
            iv = _angle_interval(zt, prec)
            twopi = pi_iv(prec).mul_int(2)
            while iv.lo.sign < 0:
                iv = iv + twopi
            while iv.lo >= twopi.hi:
                iv = iv - twopi
            keyed.append((iv, zt))
        if prec > 1 << 14:
            raise ExactnessError("angle sort failed to separate points")


def _arc_midpoint(za: AlgebraicNumber, zb: AlgebraicNumber,
                  halfway_angle: RIv) -> AlgebraicNumber:
    """The unit point at the middle of the arc from za to zb (ccw)."""
    prod = za * zb
    stretched = prod.defining_poly.compose_power(2)
    cands = [f for f, _ in stretched.factor_irreducible()]

    def approx(prec: int) -> BoxIv:
        return BoxIv(cos_iv(halfway_angle, prec), sin_iv(halfway_angle, prec))

    return _locate(cands, approx)


def exclusion_radius(Z1: Sequence[AlgebraicNumber]
                     ) -> Union[AlgebraicNumber, tuple]:
    """Minimal b > 0 such that some unit z keeps |z - zeta| >= 1/b for all
    zeta in Z1: the reciprocal of the widest-gap arc-midpoint chord."""
    pts: list = []
    for z in Z1:
        if not any(z == w for w in pts):
            pts.append(z)
    if not pts:
        raise ValueError("empty first-coordinate set")
    for z in pts:
        assert z.is_unit_modulus(), "exclusion radius needs unit points"
    if len(pts) == 1:
        # the antipode sits at distance exactly 2
        return AlgebraicNumber.from_rational(Fraction(1, 2))
    ordered = _sorted_by_angle(pts)
    prec = 192
    angles = [_angle_interval(z, prec) for z in ordered]
    twopi = pi_iv(prec).mul_int(2)
    norm_angles = []
    for iv in angles:
        while iv.lo.sign < 0:
            iv = iv + twopi
        while iv.lo >= twopi.hi:
            iv = iv - twopi
        norm_angles.append(iv)
    best_chord_sq = None
    best_mid = None
    n = len(ordered)
    for i in range(n):
        a = ordered[i]
        b = ordered[(i + 1) % n]
        ia = norm_angles[i]
        ib = norm_angles[(i + 1) % n]
        if (i + 1) % n == i:
            ib = ia + twopi
        if (i + 1) % n <= i:  # wrap-around gap
            ib = ib + twopi
        halfway = RIv(((ia + ib).lo).shr(1), ((ia + ib).hi).shr(1))
        mid = _arc_midpoint(a, b, halfway)
        chord_sq = (mid - a).modulus_sq()
        if best_chord_sq is None or chord_sq.compare_real(best_chord_sq) > 0:
            best_chord_sq = chord_sq
            best_mid = mid
    chord = _sqrt_positive(best_chord_sq)
    return chord.inv()


# ---------------------------------------------------------------------------
# Gap bounds from linear forms in logarithms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapBound:
    """The exact rational value (1/2) * base^(-exponent), kept in log form.

    Exponents here are astronomically large; the value is never
    materialized, comparisons happen through certified logarithms.
    """

    base: int       # 2n + 1
    exponent: int

    def ln_iv(self, prec: int = 96) -> RIv:
        lb = ln_iv(Fraction(self.base), prec)
        return (-lb.mul_int(self.exponent)) - ln_iv(Fraction(2), prec)

    def is_strictly_below(self, value: Fraction) -> bool:
        """Certified self < value for a positive rational value."""
        if value <= 0:
            return False
        mine = self.ln_iv()
        theirs = ln_iv(value, 96)
        return mine.hi < theirs.lo

    def as_fraction(self) -> Fraction:
        bits = self.exponent * self.base.bit_length()
        if bits > 1 << 20:
            raise OverflowError("gap bound too small to materialize")
        return Fraction(1, 2 * self.base ** self.exponent)


def baker_exponent(lam: AlgebraicNumber, zeta: AlgebraicNumber) -> int:
    """Integer exponent E >= (ln^2 H)(48 d^2)^10 for the pair."""
    H = max(lam.height, zeta.height, 3)
    d = max(lam.degree, zeta.degree)
    lnH_ub = ln_iv(Fraction(H), 64).hi.as_fraction()
    val = (48 * d * d) ** 10 * lnH_ub * lnH_ub
    return int(val.__ceil__())


def baker_gap(lam: AlgebraicNumber, zeta: AlgebraicNumber, n: int) -> GapBound:
    """Certified positive lower bound on |lam^n - zeta| for unit-modulus
    algebraic lam, zeta with lam^n != zeta:  (1/2)(2n+1)^(-E)."""
    if n < 2:
        raise ValueError("index must be at least 2")
    if not (lam.is_unit_modulus() and zeta.is_unit_modulus()):
        raise ValueError("operands must have modulus one")
    powered = NumberFieldElement.generator(lam).pow(n).to_algebraic()
    if powered == zeta:
        raise ValueError("zero gap")
    return GapBound(2 * n + 1, baker_exponent(lam, zeta))


def collision_horizon(lam: AlgebraicNumber, Z1: Sequence[AlgebraicNumber],
                      cap: int = 4096) -> tuple:
    """(M, complete): for all n > M and zeta in Z1, lam^n != zeta.

    lam must not be a root of unity, so each zeta collides for at most one
    n.  Torsion zetas can never collide and are excluded outright;
    non-torsion zetas are searched up to `cap` (complete=False when a
    zeta had no collision found and could not be excluded).
    """
    if is_root_of_unity(lam) is not None:
        raise ValueError("torsion base")
    M = 0
    complete = True
    prec = 256
    th_lam = _angle_interval(lam, prec)
    for zeta in Z1:
        if is_root_of_unity(zeta) is not None:
            continue  # lam^n = zeta would force lam to be torsion
        th_z = _angle_interval(zeta, prec)
        found = None
        for n in range(1, cap + 1):
            delta = th_lam.mul_int(n) - th_z
            if _near_two_pi_multiple(delta, prec):
                if NumberFieldElement.generator(lam).pow(n).to_algebraic() \
                        == zeta:
                    found = n
                    break
        if found is not None:
            M = max(M, found)
        else:
            complete = False
    return M, complete


def _near_two_pi_multiple(iv: RIv, prec: int) -> bool:
    twopi = pi_iv(prec).mul_int(2)
    k0 = round(iv.mid().as_fraction() / twopi.mid().as_fraction())
    for k in (k0 - 1, k0, k0 + 1):
        mult = twopi.mul_int(k)
        if not (mult.hi < iv.lo or iv.hi < mult.lo):
            return True
    return False


# ---------------------------------------------------------------------------
# Gap polynomial and the final threshold
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapCertificate:
    """Floor 1/P for the constrained minimum, plus the derived threshold."""

    D_exponent: int
    P: IntPolynomial
    M: int
    M_complete: bool
    N_prime: int
    grid: tuple            # ((x, certified_lower_bound_of_g), ...)
    b_bounds: tuple        # rational (lo, hi) bounds of the exclusion radius


def _radius_bounds(b) -> tuple:
    if isinstance(b, AlgebraicNumber):
        box = b.refine(96)
        return (box.re.lo.as_fraction(), box.re.hi.as_fraction())
    lo, hi = b
    return (Fraction(lo), Fraction(hi))


def _constrained_min_lb(h: TrigForm, branches, mu_iv: RIv,
                        z1_boxes: list, inv_x: Fraction,
                        tol: Fraction) -> Fraction:
    """Certified positive lower bound of min{h - mu : |z_1 - zeta| >= inv_x}."""
    inv_x_sq = inv_x * inv_x

    def hook(branch, xs, prec):
        z1 = BoxIv(cos_iv(xs[0], prec), sin_iv(xs[0], prec))
        for t in z1_boxes:
            if z1.distance_sq(t).hi.as_fraction() < inv_x_sq:
                return False
        return True

    lo, hi = _bnb_minimize(h, branches, tol, feasible=hook)
    return lo - mu_iv.hi.as_fraction()


def gap_polynomial(h: TrigForm, lattice: RelationLattice,
                   cert: MinCertificate, b,
                   *, lam: AlgebraicNumber, Z1: Sequence[AlgebraicNumber],
                   epsilon: Fraction, collision_M: int = 0,
                   collision_complete: bool = True,
                   grid_points: int = 14) -> GapCertificate:
    """Monomial P with g(x) >= 1/P(x) certified on a geometric grid, and the
    index threshold N' beyond which 1/P(n^D) dominates (1-eps)^n."""
    if not cert.mu_is_exact or not cert.finite:
        raise ValueError("critical-case machinery unavailable")
    b_lo, b_hi = _radius_bounds(b)
    mu_iv = cert.mu_exact.refine(128).re
    branches = _branches(lattice.basis, h.m)
    prec = 128
    z1_boxes = [z.refine(prec) for z in Z1]
    xs = [b_hi * (2 ** i) for i in range(grid_points)]
    grid = []
    # g roughly scales like 1/x^2 near a quadratic minimum; seed each
    # tolerance from the previous node to avoid refinement restarts
    prev_lb = Fraction(1, 1 << 8)
    for xval in xs:
        lb = None
        tol = prev_lb / 32
        for _ in range(8):
            lb = _constrained_min_lb(h, branches, mu_iv, z1_boxes,
                                     1 / xval, tol)
            if lb > 0:
                break
            tol /= 16
        if lb is None or lb <= 0:
            raise ExactnessError(
                f"could not certify positive constrained minimum at x={xval}")
        grid.append((xval, lb))
        prev_lb = lb / 4
    # Lojasiewicz-style monomial fit: C_e = max 1/(x^e L); pick the smallest
    # exponent where extending the grid no longer drives the constant up
    emax = 12

    def c_for(e: int, pts) -> Fraction:
        return max(1 / (x ** e * L) for x, L in pts)

    half = grid[: max(2, len(grid) // 2)]
    chosen = emax
    for e in range(emax + 1):
        if c_for(e, grid) <= 4 * c_for(e, half):
            chosen = e
            break
    C = c_for(chosen, grid)
    degree = chosen + 2
    const = int((4 * C).__ceil__())
    while True:
        P = IntPolynomial([0] * degree + [const])
        # inter-node chain: g decreasing, so g on [x_i, x_{i+1}] >= L_{i+1}
        # and 1/P there <= 1/P(x_i)
        ok = all(grid[i + 1][1] >= Fraction(1, P.eval_fraction(grid[i][0]))
                 for i in range(len(grid) - 1))
        ok = ok and grid[0][1] >= Fraction(1, P.eval_fraction(b_lo))
        if ok:
            break
        const *= 2
    E = max(baker_exponent(lam, z) for z in Z1) if Z1 else 1
    D = 2 * E + 1
    n_prime = _threshold_nprime(D, degree, Fraction(const), epsilon)
    # sanity: the very first usable index keeps x = n^D inside [b, inf)
    lnb_hi = ln_iv(max(b_hi, Fraction(2)), 64).hi.as_fraction()
    assert D * ln_iv(Fraction(2), 64).lo.as_fraction() > lnb_hi, \
        "exclusion radius out of the gap domain"
    return GapCertificate(D, P, collision_M, collision_complete, n_prime,
                          tuple(grid), (b_lo, b_hi))


def _threshold_nprime(D: int, degree: int, C: Fraction,
                      epsilon: Fraction) -> int:
    """Least certified n0 >= 3 with C n^(D*degree) < (1/(1-eps))^n for all
    n >= n0 (log-space binary search with a monotonicity guard)."""
    delta_lb = ln_iv(1 / (1 - epsilon), 96).lo.as_fraction()
    assert delta_lb > 0
    lnC_ub = ln_iv(max(C, Fraction(1)), 96).hi.as_fraction()
    A = D * degree

    def holds(n: int) -> bool:
        return lnC_ub + A * ln_iv(Fraction(n), 96).hi.as_fraction() \
            < n * delta_lb

    # beyond n_mono the difference n*delta - A*ln(n) is increasing
    n_mono = int((Fraction(A) / delta_lb).__ceil__()) + 1
    n = max(3, n_mono)
    while not holds(n):
        n *= 2
        if n > 1 << 2048:
            raise ExactnessError("threshold search diverged")
    lo, hi = max(3, n_mono) - 1, n
    # binary search in [n_mono, n]; holds is monotone there
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid < n_mono:
            lo = mid
            continue
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi
