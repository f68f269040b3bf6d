"""Rigorous supremum verification for rational functions on the imaginary
axis, uniformly in the recurrence index via compactification.

Three engines:

* a 1-D adaptive subdivision certifying sup_t |f(it)| <= M on [-T0, T0],
  with an exact coefficient-ratio tail bound for |t| >= T0;
* a 2-D subdivision in (u, s), u = 1/(n+1) and s = u t, certifying the
  bound uniformly over all indices beyond a cutoff, with an s-tail bound
  whose coefficients are bounded exactly over the u-range;
* an exact polynomial corner certificate for bounds that are attained only
  in the joint limit n -> infinity, t -> 0 (the |C_n| <= 1/2 case): near the
  corner the defect polynomial P(u, s^2) = b^2|D|^2 - a^2... is decomposed as
  u*R1 + s^2*R2 with R1, R2 verified strictly positive by interval
  enclosure, which proves P >= 0 with equality only at the corner itself.

All subdivision leaves use outward-rounded float boxes; tail and corner
data are exact rationals.  Records are deterministic and re-checkable.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import BoundViolated, Inconclusive, PoleInHalfPlane, PossiblePole
from .gaussrat import QQi, Rat
from .intervals import (BoxRatFunc, BoxRatFunc2, ComplexBox, Iv, _flt_dn,
                        _flt_up, rat_poly_abs_lower)
from .polys import QQI_FIELD, Poly, RatFunc, quadratic_roots, real_coeff_fractions

MAX_DEPTH = 40
MAX_LEAVES = 2_000_000


# ---------------------------------------------------------------------------
# Exact tail bounds from coefficient estimates.
# ---------------------------------------------------------------------------

def _abs_upper_sum(coeffs) -> list:
    return [c.abs_upper() for c in coeffs]


def tail_threshold_1d(f: RatFunc, M: Fraction, t_max_exp: int = 60):
    """Smallest power of two T0 >= 1 with a certified |f(it)| <= M for
    |t| >= T0, via triangle bounds on the numerator and a reverse-triangle
    lower bound on the denominator.  Returns (T0, bound) as Fractions.

    Requires deg num <= deg den (bounded on the axis); raises Inconclusive
    when no threshold below 2^t_max_exp works.
    """
    num, den = f.num, f.den
    if num.is_zero():
        return Fraction(1), Fraction(0)
    mN, mD = num.degree, den.degree
    if mN > mD:
        raise Inconclusive("tail", None, "numerator degree exceeds denominator degree")
    a = _abs_upper_sum(num.coeffs)
    b = _abs_upper_sum(den.coeffs)
    b_lead_low = den.lead().abs_lower()
    if b_lead_low == 0:
        raise Inconclusive("tail", None, "no lower bound for the leading coefficient")
    a_lead = a[-1]
    a_rest = sum(a[:-1], Fraction(0))
    b_rest = sum(b[:-1], Fraction(0))
    T = Fraction(1)
    for _ in range(t_max_exp + 1):
        den_low = b_lead_low - b_rest / T
        if den_low > 0:
            # |t|^(mN-mD) <= T^(mN-mD) for |t| >= T when mN <= mD
            bound = (a_lead + a_rest / T) / den_low * T ** (mN - mD)
            if bound <= M:
                return T, bound
        T *= 2
    raise Inconclusive("tail", None, f"no tail threshold below 2^{t_max_exp}")


def reverse_s_pair(num_u, den_u):
    """The far-field pair: substitute s = 1/w and clear the common power
    w^degs, i.e. reverse the inner coefficient lists to a shared length.
    The image of |s| >= 1 is 0 < |w| <= 1, and w = 0 is the (finite) value
    at s = infinity, so no analytic tail bound is needed."""
    degs = 0
    for p in (num_u, den_u):
        for sp in p.coeffs:
            degs = max(degs, sp.degree)

    def rev(poly_u):
        rows = []
        for sp in poly_u.coeffs:
            cs = [sp[degs - k] for k in range(degs + 1)]
            rows.append(Poly(cs, QQI_FIELD))
        return Poly(rows, poly_u.field)

    return rev(num_u), rev(den_u)


# ---------------------------------------------------------------------------
# 1-D axis subdivision.
# ---------------------------------------------------------------------------

def verify_axis_1d(f: RatFunc, M: Fraction, name: str,
                   max_depth: int = MAX_DEPTH, max_leaves: int = MAX_LEAVES):
    """Certify sup_{t real} |f(it)| <= M.

    Returns a record with the tail threshold and the verified leaves of the
    adaptive subdivision of [-T0, T0]; raises BoundViolated (with an exact
    witness) or Inconclusive."""
    import numpy as np
    from .boxbatch import BatchRatFunc1
    if real_coeff_fractions(f.num) is None or real_coeff_fractions(f.den) is None:
        raise Inconclusive(name, None, "expected real rational coefficients")
    # canonical exact probes first, so obvious violations get clean witnesses
    for t_probe in (Fraction(0), Fraction(1), Fraction(-1)):
        val = f.eval(QQi(0, t_probe))
        if val.abs2() > M * M:
            raise BoundViolated(name, f"t={t_probe}", repr(val))
    T0, tail_bound = tail_threshold_1d(f, M)
    batch = BatchRatFunc1(f)
    M_f = _flt_dn(M)
    M_up = float(M)
    leaves = []
    los = np.array([-float(T0)])
    his = np.array([float(T0)])
    depth = np.array([0])
    undecided = 0
    worst_excess = 0.0
    while los.size:
        if len(leaves) > max_leaves:
            raise Inconclusive(name, worst_excess, "leaf budget exhausted")
        sup, inf_, ok = batch.abs_bounds_imag_axis(los, his)
        sup = np.where(ok, sup, math.inf)
        inf_ = np.where(ok, inf_, 0.0)
        good = sup <= M_f
        for i in np.flatnonzero(good):
            leaves.append((float(los[i]), float(his[i]), float(sup[i])))
        bad = ~good
        for i in np.flatnonzero(bad & (inf_ > M_up)):
            _confirm_violation(f, M, float(los[i]), float(his[i]), name)
        exhausted = bad & (depth >= max_depth)
        for i in np.flatnonzero(exhausted):
            # a crossing box: try an exact violation probe, else leave the
            # decision open but keep scanning (violations elsewhere win)
            _confirm_violation(f, M, float(los[i]), float(his[i]), name)
            undecided += 1
            worst_excess = max(worst_excess, float(sup[i]) - M_up)
        split = bad & ~exhausted
        slo, shi, sd = los[split], his[split], depth[split]
        mid = 0.5 * (slo + shi)
        los = np.concatenate([slo, mid])
        his = np.concatenate([mid, shi])
        depth = np.concatenate([sd + 1, sd + 1])
    if undecided:
        raise Inconclusive(name, worst_excess,
                           f"{undecided} boxes undecided at depth {max_depth}")
    leaves.sort()
    return {
        "target": name,
        "bound": str(M),
        "T0": str(T0),
        "tail_bound": str(tail_bound),
        "leaves": [[a.hex(), b.hex(), s.hex()] for a, b, s in leaves],
    }


def _confirm_violation(f: RatFunc, M: Fraction, lo: float, hi: float, name: str):
    """Exact check at the box midpoint; raises BoundViolated if confirmed."""
    t_mid = Fraction(lo) + (Fraction(hi) - Fraction(lo)) / 2
    val = f.eval(QQi(0, t_mid))
    if val.abs2() > M * M:
        raise BoundViolated(name, f"t={t_mid}", repr(val))
    # enclosure was merely loose: caller keeps subdividing


# ---------------------------------------------------------------------------
# 2-D compactified subdivision.
# ---------------------------------------------------------------------------

def _subdivide_2d(batch, rects, M: Fraction, name: str, aspect: float,
                  max_depth: int, max_leaves: int):
    """Adaptive bisection of the rectangles until every box has a certified
    enclosure below M.  Returns sorted verified leaves."""
    import numpy as np
    M_f = _flt_dn(M)
    M_up = float(M)
    leaves = []
    undecided = 0
    worst_excess = 0.0
    ulos = np.array([r[0] for r in rects], dtype=float)
    uhis = np.array([r[1] for r in rects], dtype=float)
    slos = np.array([r[2] for r in rects], dtype=float)
    shis = np.array([r[3] for r in rects], dtype=float)
    depth = np.zeros(len(rects), dtype=np.int64)
    while ulos.size:
        if len(leaves) > max_leaves:
            raise Inconclusive(name, worst_excess, "leaf budget exhausted")
        sup, _, ok = batch.abs_bounds(ulos, uhis, slos, shis)
        sup = np.where(ok, sup, math.inf)
        good = sup <= M_f
        for i in np.flatnonzero(good):
            leaves.append((float(ulos[i]), float(uhis[i]),
                           float(slos[i]), float(shis[i]), float(sup[i])))
        bad = ~good
        exhausted = bad & (depth >= max_depth)
        for i in np.flatnonzero(exhausted):
            undecided += 1
            if math.isfinite(sup[i]):
                worst_excess = max(worst_excess, float(sup[i]) - M_up)
        split = bad & ~exhausted
        ul, uh = ulos[split], uhis[split]
        sl, sh = slos[split], shis[split]
        sd = depth[split] + 1
        by_u = (uh - ul) >= (sh - sl) * aspect
        um = 0.5 * (ul + uh)
        sm = 0.5 * (sl + sh)
        # u-split children keep the s-range; s-split children keep the u-range
        ulos = np.concatenate([ul, np.where(by_u, um, ul)])
        uhis = np.concatenate([np.where(by_u, um, uh), uh])
        slos = np.concatenate([sl, np.where(by_u, sl, sm)])
        shis = np.concatenate([np.where(by_u, sh, sm), sh])
        depth = np.concatenate([sd, sd])
    if undecided:
        raise Inconclusive(name, worst_excess,
                           f"{undecided} boxes undecided at depth {max_depth}")
    leaves.sort()
    return leaves


def verify_bound_2d(num_u, den_u, u0: Fraction, M: Fraction, name: str,
                    corner: dict | None = None,
                    max_depth: int = MAX_DEPTH, max_leaves: int = MAX_LEAVES):
    """Certify |N(u,s)/D(u,s)| <= M for u in [0, u0], s real.

    The pair (N, D) is the compactified-and-rescaled target: u = 1/(n+1),
    lambda = i s / u.  The core region |s| <= 1 is subdivided directly; the
    far field |s| >= 1 is mapped to w = 1/s in [-1, 1] by coefficient
    reversal (both regions are compact, so no analytic tail is needed).
    `corner` is an optional corner-certificate record (from
    `corner_certificate`) covering [0, cu] x [-cs, cs] of the core, inside
    which the bound is attained only at (0, 0) and plain enclosure cannot
    close.
    """
    from .boxbatch import BatchRatFunc2
    u0f = _flt_up(u0)
    if corner is not None:
        # complementary rectangles start just inside the corner box (overlap
        # is harmless, gaps are not); when the corner box spans the whole
        # u-range the middle strip is covered entirely by the certificate
        cu = _flt_dn(Fraction(corner["u_hi"]))
        cs = _flt_dn(Fraction(corner["s_hi"]))
        core_rects = [(0.0, u0f, cs, 1.0), (0.0, u0f, -1.0, -cs)]
        if cu < u0f:
            core_rects.insert(0, (cu, u0f, -cs, cs))
    else:
        core_rects = [(0.0, u0f, -1.0, 1.0)]
    far_rects = [(0.0, u0f, -1.0, 1.0)]
    aspect = u0f / 2.0
    core = _subdivide_2d(BatchRatFunc2(num_u, den_u), core_rects, M,
                         name + ":core", aspect, max_depth, max_leaves)
    rnum, rden = reverse_s_pair(num_u, den_u)
    far = _subdivide_2d(BatchRatFunc2(rnum, rden), far_rects, M,
                        name + ":far", aspect, max_depth, max_leaves)
    rec = {
        "target": name,
        "bound": str(M),
        "u0": str(u0),
        "far_field": "w = 1/s by coefficient reversal, |w| <= 1",
        "leaves_core": [[a.hex(), b.hex(), c.hex(), d.hex(), s.hex()]
                        for a, b, c, d, s in core],
        "leaves_far": [[a.hex(), b.hex(), c.hex(), d.hex(), s.hex()]
                       for a, b, c, d, s in far],
    }
    if corner is not None:
        rec["corner"] = corner
    return rec


# ---------------------------------------------------------------------------
# Corner certificate.
# ---------------------------------------------------------------------------

def _poly2_conj_product(pu, qu):
    """Product of two (u, s) polynomials where the second is coefficient-
    conjugated: sum over u-powers with inner s-convolutions."""
    rows_p = [sp for sp in pu.coeffs]
    rows_q = [sq.conj_coeffs() for sq in qu.coeffs]
    if not rows_p or not rows_q:
        return Poly.zero(pu.field)
    out = [Poly.zero(QQI_FIELD) for _ in range(len(rows_p) + len(rows_q) - 1)]
    for i, a in enumerate(rows_p):
        for j, b in enumerate(rows_q):
            out[i + j] = out[i + j] + a * b
    return Poly(out, pu.field)


def _even_to_sigma(poly_u):
    """Substitute sigma = s^2 in a pair-even polynomial (all s-degrees even)."""
    rows = []
    for sp in poly_u.coeffs:
        if any(k % 2 for k, c in enumerate(sp.coeffs) if not c.is_zero()):
            raise ValueError("polynomial is not even in s")
        rows.append(Poly(list(sp.coeffs[0::2]), QQI_FIELD))
    return Poly(rows, poly_u.field)


class _RealPoly2Boxes:
    """Real-coefficient (u, sigma) polynomial compiled to Iv constants."""

    def __init__(self, poly_u):
        self.rows = []
        for sp in poly_u.coeffs:
            fr = real_coeff_fractions(sp)
            if fr is None:
                raise ValueError("expected real coefficients")
            self.rows.append([Iv.from_rat(c) for c in fr])

    def eval(self, u: Iv, s: Iv) -> Iv:
        zero = Iv.point(0.0)
        acc = zero
        for row in reversed(self.rows):
            inner = zero
            if row:
                inner = row[-1]
                for c in reversed(row[:-1]):
                    inner = inner * s + c
            acc = acc * u + inner
        return acc


def _positive_on_box(box_poly: "_RealPoly2Boxes", urange, srange, budget=200000):
    """Smallest certified lower bound of a real (u, sigma) polynomial over
    the rectangle, by adaptive bisection; returns None if positivity cannot
    be certified within the budget."""
    stack = [(urange[0], urange[1], srange[0], srange[1])]
    lowest = math.inf
    count = 0
    while stack:
        count += 1
        if count > budget:
            return None
        ulo, uhi, slo, shi = stack.pop()
        enc = box_poly.eval(Iv(ulo, uhi), Iv(slo, shi))
        if enc.lo > 0.0:
            lowest = min(lowest, enc.lo)
            continue
        if (uhi - ulo) < 1e-12 and (shi - slo) < 1e-12:
            return None
        if (uhi - ulo) * (srange[1] - srange[0] + 1e-300) >= \
                (shi - slo) * (urange[1] - urange[0] + 1e-300):
            m = 0.5 * (ulo + uhi)
            stack.append((ulo, m, slo, shi))
            stack.append((m, uhi, slo, shi))
        else:
            m = 0.5 * (slo + shi)
            stack.append((ulo, uhi, slo, m))
            stack.append((ulo, uhi, m, shi))
    return lowest


def corner_certificate(num_u, den_u, M: Fraction, u_hi: Fraction, s_hi: Fraction,
                       min_h_exp: int = 20):
    """Exact certificate that |N/D| <= M on [0,u_hi] x [-s_hi,s_hi] when the
    bound is attained exactly at (u,s) = (0,0).

    Builds P(u, sigma) = p^2 |D|^2 - q^2 |N|^2 (M = p/q, sigma = s^2), which
    must vanish at the corner, splits P = u R1(u, sigma) + sigma R2(sigma),
    and certifies R1 > 0 and R2 > 0 on the box by adaptive interval
    subdivision (halving the whole box only when positivity cannot be
    certified at this size).  Positive R1, R2 give P >= 0 with equality only
    at the corner, hence the bound wherever the denominator does not vanish.
    """
    p, q = M.numerator, M.denominator
    DD = _poly2_conj_product(den_u, den_u)
    NN = _poly2_conj_product(num_u, num_u)
    # |N/D| <= p/q  <=>  p^2 |D|^2 - q^2 |N|^2 >= 0
    P = DD.scale(QQi(p * p)) - NN.scale(QQi(q * q))
    P = _even_to_sigma(P)
    # corner value must vanish exactly (bound attained in the limit)
    c00 = P.coeffs[0].coeffs[0] if P.coeffs and P.coeffs[0].coeffs else QQi(0)
    if not c00.is_zero():
        raise ValueError("corner defect polynomial does not vanish at the corner")
    p0 = P.coeffs[0] if P.coeffs else Poly.zero(QQI_FIELD)        # P(0, sigma)
    r2, rem = p0.synth_div(QQi(0))                                 # P(0,sigma)/sigma
    assert rem.is_zero()
    R1 = Poly(list(P.coeffs[1:]), P.field)                         # (P - P(0,.))/u
    box_r1 = _RealPoly2Boxes(R1)
    box_r2 = _RealPoly2Boxes(Poly([r2], P.field))
    uh, sh = Fraction(u_hi), Fraction(s_hi)
    for _ in range(min_h_exp):
        sig_hi = sh * sh
        lo1 = _positive_on_box(box_r1, (0.0, _flt_up(uh)), (0.0, _flt_up(sig_hi)))
        lo2 = _positive_on_box(box_r2, (0.0, 0.0), (0.0, _flt_up(sig_hi)))
        if lo1 is not None and lo2 is not None:
            return {
                "u_hi": str(uh),
                "s_hi": str(sh),
                "r1_lower": lo1.hex(),
                "r2_lower": lo2.hex(),
            }
        uh /= 2
        sh /= 2
    raise Inconclusive("corner", None, "corner certificate box shrank out")


# ---------------------------------------------------------------------------
# Routh-Hurwitz stability and Phragmen-Lindelof premises.
# ---------------------------------------------------------------------------

def routh_hurwitz_stable(coeffs):
    """True iff all roots of the real polynomial lie in the open left
    half-plane; False when a right-half-plane root is certain; None on
    boundary/degenerate cases (imaginary-axis roots, zero rows).

    Exact rational Routh array; `coeffs` lowest degree first.
    """
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return None
    if c[-1] < 0:
        c = [-x for x in c]
    n = len(c) - 1
    # positive coefficients are necessary; a strictly negative one certifies
    # a right-half-plane or imaginary-axis crossing with sign change
    if any(x < 0 for x in c):
        return False
    if any(x == 0 for x in c):
        return None
    rows = [c[n::-2], c[n - 1::-2]]
    for _ in range(n - 1):
        a, b = rows[-2], rows[-1]
        if not b or b[0] == 0:
            return None
        new = []
        for k in range(len(a) - 1):
            ak1 = a[k + 1]
            bk1 = b[k + 1] if k + 1 < len(b) else Fraction(0)
            new.append((b[0] * ak1 - a[0] * bk1) / b[0])
        if not new:
            break
        rows.append(new)
    first = [r[0] for r in rows if r]
    if any(x == 0 for x in first):
        return None
    if all(x > 0 for x in first):
        return True
    return False


_SUP_X2_EXP = Fraction(47, 10)   # sup_{x>=0} x^2 e^{-sqrt(x)} = 256/e^4 < 4.7


def pl_premises(f: RatFunc, name: str, compact_depth: int = 80):
    """Premise record for the Phragmen-Lindelof extension of an axis bound.

    Checks (i) pole-freeness on the closed right half-plane via the exact
    Routh-Hurwitz test on the denominator, (ii) the degree condition
    deg num <= deg den + 2, and (iii) produces an explicit growth constant C
    with |f(lambda)| <= C e^{|lambda|^(1/2)} on the half-plane (a coefficient
    tail bound beyond an exact radius plus an interval supremum inside).
    Raises PoleInHalfPlane with a witness root when (i) fails.
    """
    num, den = f.num, f.den
    dfr = real_coeff_fractions(den)
    if dfr is None:
        raise Inconclusive(name, None, "denominator has non-real coefficients")
    stable = routh_hurwitz_stable(dfr)
    if stable is False:
        raise PoleInHalfPlane(_halfplane_root_witness(dfr))
    if stable is None:
        if den.degree == 2:
            roots, exact, *_ = quadratic_roots(den)
            vals = [r.to_complex() if isinstance(r, QQi) else r for r in roots]
            if any(v.real >= 0 for v in vals):
                raise PoleInHalfPlane(next(v for v in vals if v.real >= 0))
            stable = True
        elif den.degree == 1:
            root = -den.coeffs[0] / den.coeffs[1]
            if root.re >= 0:
                raise PoleInHalfPlane(root.to_complex())
            stable = True
        else:
            raise Inconclusive(name, None, "Routh-Hurwitz degenerate case")
    d = num.degree - den.degree
    degree_ok = d <= 2
    if not degree_ok:
        raise Inconclusive(name, None, "degree growth premise fails")
    # tail constant: |f| <= K |lambda|^max(d,0) for |lambda| >= R1
    a = _abs_upper_sum(num.coeffs)
    b = _abs_upper_sum(den.coeffs)
    b_lead = den.lead().abs_lower()
    R1 = max(Fraction(1), 2 * sum(b[:-1], Fraction(0)) / b_lead)
    K = 2 * sum(a, Fraction(0)) / b_lead
    c_tail = K * (_SUP_X2_EXP if d > 0 else Fraction(1))
    # compact part: sup over the half-plane rectangle [0,R1] x [-R1,R1]
    sup_c = _sup_abs_rect(f, R1, name, compact_depth)
    C = max(float(c_tail), sup_c)
    return {
        "target": name,
        "pole_free_rhp": True,
        "hurwitz": True,
        "deg_num": num.degree,
        "deg_den": den.degree,
        "degree_check": "deg(num) <= deg(den) + 2",
        "growth_radius": str(R1),
        "growth_constant": C,
    }


def _halfplane_root_witness(dfr):
    import numpy as np
    roots = np.roots([float(x) for x in reversed(dfr)])
    cands = [complex(r) for r in roots if r.real >= -1e-12]
    return cands[0] if cands else None


def _sup_abs_rect(f: RatFunc, R1: Fraction, name: str, max_depth: int,
                  grid_depth: int = 5):
    """Finite upper bound for sup |f| on the half-plane rectangle
    [0, R1] x [-R1, R1]: subdivide to a fixed grid depth (the bound need not
    be tight), refining further only where the denominator box still
    contains zero."""
    box_f = BoxRatFunc(f)
    R = _flt_up(R1)
    stack = [(0.0, R, -R, R, 0)]
    sup = 0.0
    while stack:
        xlo, xhi, ylo, yhi, depth = stack.pop()
        bx = ComplexBox(Iv(xlo, xhi), Iv(ylo, yhi))
        try:
            s = box_f.enclose(bx).abs_upper()
        except PossiblePole:
            s = math.inf
        if math.isfinite(s) and depth >= grid_depth:
            sup = max(sup, s)
            continue
        if depth >= max_depth:
            raise Inconclusive(name, None, "pole-adjacent box at max depth")
        if (xhi - xlo) >= (yhi - ylo):
            m = 0.5 * (xlo + xhi)
            stack.append((xlo, m, ylo, yhi, depth + 1))
            stack.append((m, xhi, ylo, yhi, depth + 1))
        else:
            m = 0.5 * (ylo + yhi)
            stack.append((xlo, xhi, ylo, m, depth + 1))
            stack.append((xlo, xhi, m, yhi, depth + 1))
    return sup
