"""Second-order Fuchsian ODEs with parameter-dependent rational coefficients.

Equations are kept in normalized form  f'' + p(z) f' + q(z) f = 0  with p, q
rational in z and in the spectral parameter (`BiRat`).  The module classifies
singular points, computes indicial data, and generates Frobenius series
solutions around regular singular points, exactly (Gaussian rationals) or in
floating point.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import (LogCase, NotFuchsian, NotSingular, OutsideDisk,
                     PoleError, UnresolvedFactor)
from .gaussrat import QQi
from .polys import (L_FIELD, QQI_FIELD, Poly, RatFunc, birat_eval_lambda,
                    exact_roots, lam_const, quadratic_roots, z_poly)


# ---------------------------------------------------------------------------
# ODE container.
# ---------------------------------------------------------------------------

INFINITY = "inf"


def _den_as_qqi_poly(den: Poly) -> Poly:
    """Denominator of a BiRat as a QQi polynomial (its coefficients must be
    independent of the spectral parameter)."""
    out = []
    for c in den.coeffs:
        if not c.is_constant():
            raise UnresolvedFactor("pole locations depend on the spectral parameter")
        out.append(c.constant_value())
    return Poly(out, QQI_FIELD)


def _pole_order(r: RatFunc, z0: QQi) -> int:
    """Multiplicity of z0 as a pole of a reduced BiRat."""
    if r.is_zero():
        return 0
    den = _den_as_qqi_poly(r.den)
    shifted = den.shift_center(z0)
    k = 0
    while k <= shifted.degree and shifted.coeffs[k].is_zero():
        k += 1
    return k


class SingularPointData:
    """Indicial data at one (finite or infinite) regular singular point."""

    def __init__(self, location, p0: RatFunc, q0: RatFunc, pole_orders):
        self.location = location
        self.p0 = p0
        self.q0 = q0
        self.pole_orders = pole_orders
        # P(s) = s(s-1) + p0 s + q0, as a polynomial in s over RatL
        one = L_FIELD.one
        self.indicial = Poly([q0, p0 - one, one], L_FIELD)
        self._exponents = self._symbolic_exponents()

    def _symbolic_exponents(self):
        p0, q0 = self.p0, self.q0
        one = L_FIELD.one
        disc = (p0 - one) * (p0 - one) - lam_const(4) * q0
        sq = _ratl_sqrt(disc)
        if sq is None:
            return None
        half = lam_const(Fraction(1, 2))
        return ((one - p0 + sq) * half, (one - p0 - sq) * half)

    @property
    def exponents(self):
        """Symbolic exponent pair (RatL, RatL), or None when the discriminant
        has no rational-function square root."""
        return self._exponents

    def exponents_at(self, lam: QQi):
        """Exact exponent pair at a concrete spectral value, Re-descending."""
        poly = Poly([self.indicial.coeffs[0].eval(lam),
                     self.indicial.coeffs[1].eval(lam),
                     QQi(1)], QQI_FIELD)
        out = quadratic_roots(poly)
        roots, exact = out[0], out[1]
        if not exact:
            raise UnresolvedFactor("indicial exponents not exactly representable")
        return _order_by_re(roots)

    def resonant_at(self, lam: QQi) -> bool:
        """True when the exponent difference is a nonnegative integer."""
        s_plus, s_minus = self.exponents_at(lam)
        d = s_plus - s_minus
        return d.is_real() and d.re.denominator == 1 and d.re >= 0

    def __repr__(self):
        return f"SingularPointData({self.location}, p0={self.p0!r}, q0={self.q0!r})"


def _order_by_re(pair):
    a, b = pair
    ka = (a.re, a.im) if isinstance(a, QQi) else (a.real, a.imag)
    kb = (b.re, b.im) if isinstance(b, QQi) else (b.real, b.imag)
    return (a, b) if ka >= kb else (b, a)


def _ratl_sqrt(r: RatFunc):
    """Exact square root of a RatL, or None."""
    if r.is_zero():
        return RatFunc.zero(QQI_FIELD)
    sn = _poly_sqrt(r.num)
    sd = _poly_sqrt(r.den)
    if sn is None or sd is None:
        return None
    return RatFunc(sn, sd)


def _poly_sqrt(p: Poly):
    if p.is_zero():
        return p
    if p.degree % 2:
        return None
    lead = p.lead().sqrt_exact()
    if lead is None:
        return None
    half = p.degree // 2
    b = [QQi(0)] * (half + 1)
    b[half] = lead
    for k in range(half - 1, -1, -1):
        # coefficient of z^(k+half) in b^2 must match p
        acc = QQi(0)
        for j in range(k + 1, half):
            if k + half - j <= half:
                acc = acc + b[j] * b[k + half - j]
        b[k] = (p[k + half] - acc) / (QQi(2) * lead)
    cand = Poly(b, QQI_FIELD)
    return cand if cand * cand == p else None


class ParamODE:
    """f'' + p f' + q f = 0 with BiRat coefficients and gauge bookkeeping."""

    def __init__(self, p: RatFunc, q: RatFunc, gauge_log=(), name=""):
        self.p = p
        self.q = q
        self.gauge_log = tuple(gauge_log)
        self.name = name

    def __eq__(self, other):
        if not isinstance(other, ParamODE):
            return NotImplemented
        return self.p == other.p and self.q == other.q

    def __repr__(self):
        return f"ParamODE({self.name or 'unnamed'})"

    # -- singular point analysis ----------------------------------------------

    def finite_singular_points(self):
        pts = set()
        for r in (self.p, self.q):
            if r.is_zero():
                continue
            den = _den_as_qqi_poly(r.den)
            for root in exact_roots(den):
                pts.add(root)
        return sorted(pts, key=lambda z: (z.re, z.im))

    def invert(self) -> "ParamODE":
        """Equation satisfied by F(w) = f(1/w); classifies the point at infinity."""
        p_inv = self.p.compose_mobius(QQi(0), QQi(1), QQi(1), QQi(0))
        q_inv = self.q.compose_mobius(QQi(0), QQi(1), QQi(1), QQi(0))
        w = RatFunc.x(L_FIELD)
        two = RatFunc.const(lam_const(2), L_FIELD)
        p_new = two / w - p_inv / (w * w)
        q_new = q_inv / (w * w * w * w)
        return ParamODE(p_new, q_new, name=self.name + "@inv")

    def singular_data(self, point) -> SingularPointData:
        """Indicial data at a finite point or at INFINITY."""
        if point == INFINITY:
            inv = self.invert()
            data = inv.singular_data(QQi(0))
            return SingularPointData(INFINITY, data.p0, data.q0, data.pole_orders)
        z0 = point if isinstance(point, QQi) else QQi(point)
        op = _pole_order(self.p, z0)
        oq = _pole_order(self.q, z0)
        if op == 0 and oq == 0:
            raise NotSingular(f"{z0!r} is an ordinary point")
        if op > 1 or oq > 2:
            raise NotFuchsian(z0, max(op, oq - 1))
        lin = RatFunc.from_poly(z_poly(-lam_const(z0), 1))
        p0 = birat_eval_z_safe(self.p * lin, z0)
        q0 = birat_eval_z_safe(self.q * lin * lin, z0)
        return SingularPointData(z0, p0, q0, (op, oq))


def birat_eval_z_safe(f: RatFunc, z0: QQi) -> RatFunc:
    z0c = lam_const(z0)
    den = f.den.eval(z0c)
    if den.is_zero():
        raise PoleError(f"pole at {z0!r}")
    return f.num.eval(z0c) / den


def fuchs_check(ode: ParamODE):
    """Classify all singular points (finite ones and infinity).

    Returns a list of SingularPointData; raises NotFuchsian if any pole order
    exceeds the Fuchsian bound.  Infinity is included whenever it is not an
    ordinary point of the equation.
    """
    out = []
    for z0 in ode.finite_singular_points():
        out.append(ode.singular_data(z0))
    try:
        out.append(ode.singular_data(INFINITY))
    except NotSingular:
        pass
    return out


# ---------------------------------------------------------------------------
# Frobenius series.
# ---------------------------------------------------------------------------

class SeriesSolution:
    """Truncated Frobenius solution z0 + w -> w^sigma * sum a_k w^k."""

    def __init__(self, center, sigma, coeffs, radius, mode):
        self.center = center
        self.sigma = sigma
        self.coeffs = coeffs
        self.radius = radius     # guaranteed convergence radius (float)
        self.mode = mode

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __repr__(self):
        return (f"SeriesSolution(center={self.center}, sigma={self.sigma}, "
                f"N={self.order}, mode={self.mode})")


def _taylor_ratio_exact(num: Poly, den: Poly, N: int):
    if den.is_zero() or den.coeffs[0].is_zero():
        raise PoleError("Taylor expansion at a pole")
    c = []
    d0 = den.coeffs[0]
    for k in range(N + 1):
        s = num[k]
        for j in range(1, k + 1):
            s = s - den[j] * c[k - j]
        c.append(s / d0)
    return c


def _taylor_ratio_float(num, den, N: int):
    if not den or den[0] == 0:
        raise PoleError("Taylor expansion at a pole")
    c = []
    for k in range(N + 1):
        s = num[k] if k < len(num) else 0j
        for j in range(1, min(k, len(den) - 1) + 1):
            s -= den[j] * c[k - j]
        c.append(s / den[0])
    return c


def _local_hat_series(ode: ParamODE, z0: QQi, lam, N: int, mode: str):
    """Taylor coefficients of w*p(z0+w) and w^2*q(z0+w) at concrete lambda."""
    w_inner = z_poly(lam_const(z0), 1)
    p_sh = ode.p.compose_poly(w_inner)
    q_sh = ode.q.compose_poly(w_inner)
    w = RatFunc.x(L_FIELD)
    ph = w * p_sh            # reduced: pole at 0 cancels for regular singular pts
    qh = (w * w) * q_sh
    if mode == "exact":
        lamq = lam if isinstance(lam, QQi) else QQi(lam)
        phl = birat_eval_lambda(ph, lamq)
        qhl = birat_eval_lambda(qh, lamq)
        return (_taylor_ratio_exact(phl.num, phl.den, N),
                _taylor_ratio_exact(qhl.num, qhl.den, N))
    lamc = complex(lam)

    def fc(poly):
        return [c.eval(lamc, lift=lambda x: x.to_complex()) for c in poly.coeffs] or [0j]

    return (_taylor_ratio_float(fc(ph.num), fc(ph.den), N),
            _taylor_ratio_float(fc(qh.num), fc(qh.den), N))


def _select_branch(exponents, branch):
    s_plus, s_minus = exponents
    if branch == "top":
        return s_plus
    if branch == "sub":
        return s_minus
    if isinstance(branch, tuple) and branch[0] == "value":
        target = branch[1]
        for s in exponents:
            sv = s.to_complex() if isinstance(s, QQi) else complex(s)
            if abs(sv - complex(target)) < 1e-9:
                return s
        raise LogCase(f"no exponent equal to {target}")
    raise ValueError(f"unknown branch {branch!r}")


def frobenius_series(ode: ParamODE, point, branch, lam, N: int,
                     mode: str = "exact") -> SeriesSolution:
    """Frobenius solution at a regular singular point for a concrete lambda.

    branch: "top" (larger Re exponent), "sub", or ("value", v) to select the
    exponent equal to v.  The sub branch raises LogCase when the exponent
    difference is a nonnegative integer (log solutions are never generated).
    """
    z0 = point if isinstance(point, QQi) else QQi(point)
    data = ode.singular_data(z0)
    if mode == "exact":
        lamq = lam if isinstance(lam, QQi) else QQi(lam)
        exps = data.exponents_at(lamq)
    else:
        c0 = data.indicial.coeffs[0].eval(complex(lam), lift=lambda x: x.to_complex())
        c1 = data.indicial.coeffs[1].eval(complex(lam), lift=lambda x: x.to_complex())
        sq = cmath.sqrt(c1 * c1 - 4 * c0)
        exps = _order_by_re(((-c1 + sq) / 2, (-c1 - sq) / 2))
    sigma = _select_branch(exps, branch)
    diff = exps[0] - exps[1]
    if sigma == exps[1] and sigma != exps[0]:
        if mode == "exact":
            if diff.is_real() and diff.re.denominator == 1 and diff.re >= 0:
                raise LogCase(f"resonant exponents, difference {diff!r}")
        else:
            if abs(diff.imag) < 1e-12 and abs(diff.real - round(diff.real)) < 1e-12 \
                    and diff.real >= -1e-12:
                raise LogCase(f"resonant exponents, difference {diff!r}")

    ph, qh = _local_hat_series(ode, z0, lam, N, mode)
    p0, q0 = ph[0], qh[0]

    if mode == "exact":
        one = QQi(1)
        a = [one]
        for k in range(1, N + 1):
            sk = sigma + QQi(k)
            P = sk * (sk - one) + p0 * sk + q0
            if P.is_zero():
                raise LogCase(f"indicial root hit at offset {k}")
            s = QQi(0)
            for j in range(1, k + 1):
                s = s + ((sigma + QQi(k - j)) * ph[j] + qh[j]) * a[k - j]
            a.append(-s / P)
    else:
        sigma = complex(sigma) if not isinstance(sigma, QQi) else sigma.to_complex()
        a = [1.0 + 0j]
        for k in range(1, N + 1):
            sk = sigma + k
            P = sk * (sk - 1) + p0 * sk + q0
            if abs(P) < 1e-13 * max(1.0, abs(sk) ** 2):
                raise LogCase(f"numerically resonant indicial value at offset {k}")
            s = 0j
            for j in range(1, k + 1):
                s += ((sigma + (k - j)) * ph[j] + qh[j]) * a[k - j]
            a.append(-s / P)

    radius = _nearest_other_singularity(ode, z0)
    return SeriesSolution(z0, sigma, a, radius, mode)


def _nearest_other_singularity(ode: ParamODE, z0: QQi) -> float:
    best = math.inf
    for z in ode.finite_singular_points():
        if z == z0:
            continue
        best = min(best, abs(z.to_complex() - z0.to_complex()))
    return best


def series_eval(sol: SeriesSolution, z, derivative: bool = False):
    """Evaluate the truncated series at z (complex), with a heuristic tail
    estimate from the last retained terms.

    Returns (value, tail_estimate) or (value, dvalue, tail_estimate) when
    derivative=True.  Raises OutsideDisk when |z-center| is not strictly
    inside the guaranteed disk.
    """
    zc = complex(z)
    center = sol.center.to_complex() if isinstance(sol.center, QQi) else complex(sol.center)
    w = zc - center
    if abs(w) >= sol.radius:
        raise OutsideDisk(f"|z-center| = {abs(w)} >= radius {sol.radius}")
    coeffs = [c.to_complex() if isinstance(c, QQi) else c for c in sol.coeffs]
    sigma = sol.sigma.to_complex() if isinstance(sol.sigma, QQi) else complex(sol.sigma)
    h = 0j
    for c in reversed(coeffs):
        h = h * w + c
    hp = 0j
    for k in range(len(coeffs) - 1, 0, -1):
        hp = hp * w + k * coeffs[k]
    if w == 0:
        value = coeffs[0] if sigma == 0 else 0j
        if derivative:
            if sigma == 0:
                dv = coeffs[1] if len(coeffs) > 1 else 0j
            elif sigma == 1:
                dv = coeffs[0]
            else:
                dv = complex(math.nan)
            return value, dv, 0.0
        return value, 0.0
    ws = cmath.exp(sigma * cmath.log(w))
    value = ws * h
    # geometric tail extrapolation from the last terms
    terms = [abs(c) * abs(w) ** k for k, c in enumerate(coeffs[-3:], start=len(coeffs) - 3)]
    last = max(terms) if terms else 0.0
    rho = abs(w) / sol.radius
    tail = abs(ws) * last * rho / (1 - rho) if rho < 1 else math.inf
    if derivative:
        dvalue = sigma * ws / w * h + ws * hp
        return value, dvalue, tail
    return value, tail


def series_residual_coeffs(ode: ParamODE, sol: SeriesSolution, lam, count: int):
    """Exact residual coefficients of the truncated series in the ODE.

    Clears denominators and convolves the raw Taylor data of the (shifted)
    coefficients against the series -- an independent path from the recurrence
    used to generate the coefficients.  The first `order-1` entries must
    vanish identically.
    """
    z0 = sol.center
    lamq = lam if isinstance(lam, QQi) else QQi(lam)
    w_inner = z_poly(lam_const(z0), 1)
    p_sh = birat_eval_lambda(ode.p.compose_poly(w_inner), lamq)
    q_sh = birat_eval_lambda(ode.q.compose_poly(w_inner), lamq)
    # common clearing: Dp*Dq * (f'' + p f' + q f)
    Dp, Dq = p_sh.den, q_sh.den
    A2 = Dp * Dq
    A1 = p_sh.num * Dq
    A0 = q_sh.num * Dp
    sigma = sol.sigma
    a = sol.coeffs
    one = QQi(1)

    def shifted_deriv(shift):
        # series coefficients of w^(-sigma+shift) * d^shift/dw^shift (w^sigma h)
        if shift == 0:
            return list(a)
        if shift == 1:
            return [(sigma + QQi(k)) * a[k] for k in range(len(a))]
        return [(sigma + QQi(k)) * (sigma + QQi(k) - one) * a[k] for k in range(len(a))]

    # residual * w^(2-sigma): sum of A2*D2[k-2-j] style convolutions; align powers
    # f'' contributes at offset -2, f' at -1, f at 0; multiply by w^2:
    out = []
    D2 = shifted_deriv(2)
    D1 = shifted_deriv(1)
    D0 = shifted_deriv(0)
    for m in range(count):
        s = QQi(0)
        for j, c in enumerate(A2.coeffs):
            if 0 <= m - j < len(D2):
                s = s + c * D2[m - j]
        for j, c in enumerate(A1.coeffs):
            if 0 <= m - j - 1 < len(D1):
                s = s + c * D1[m - j - 1]
        for j, c in enumerate(A0.coeffs):
            if 0 <= m - j - 2 < len(D0):
                s = s + c * D0[m - j - 2]
        out.append(s)
    return out
