"""Vectorized outward-rounded interval arithmetic over numpy arrays.

The subdivision engines evaluate thousands of boxes per sweep; doing the
interval Horner recursion elementwise over arrays keeps the per-leaf cost
at numpy speed while preserving the exact same IEEE operation sequence as
the scalar path (numpy elementwise ops round identically, and widening is
the same one-ulp `nextafter`).  The certificate recheck evaluates through
this module too, so stored suprema reproduce bit-identically.
"""

from __future__ import annotations

import math

import numpy as np

from .gaussrat import QQi
from .intervals import _flt_dn, _flt_up

_INF = math.inf


def _dn(x):
    return np.nextafter(x, -_INF)


def _up(x):
    return np.nextafter(x, _INF)


def iv_add(alo, ahi, blo, bhi):
    return _dn(alo + blo), _up(ahi + bhi)


def iv_sub(alo, ahi, blo, bhi):
    return _dn(alo - bhi), _up(ahi - blo)


def iv_mul(alo, ahi, blo, bhi):
    p1 = alo * blo
    p2 = alo * bhi
    p3 = ahi * blo
    p4 = ahi * bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _dn(lo), _up(hi)


def iv_sqr(alo, ahi):
    a = np.abs(alo)
    b = np.abs(ahi)
    m = np.minimum(a, b)
    M = np.maximum(a, b)
    lo = np.where((alo <= 0.0) & (ahi >= 0.0), 0.0, _dn(m * m))
    return lo, _up(M * M)


def iv_div_pos(alo, ahi, blo, bhi):
    """Interval division with a strictly positive denominator interval."""
    p1 = alo / blo
    p2 = alo / bhi
    p3 = ahi / blo
    p4 = ahi / bhi
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _dn(lo), _up(hi)


class CBoxArray:
    """Arrays of rectangular complex intervals."""

    __slots__ = ("rlo", "rhi", "ilo", "ihi")

    def __init__(self, rlo, rhi, ilo, ihi):
        self.rlo, self.rhi, self.ilo, self.ihi = rlo, rhi, ilo, ihi

    @staticmethod
    def zeros_like(x):
        z = np.zeros_like(x)
        return CBoxArray(z.copy(), z.copy(), z.copy(), z.copy())

    def add(self, o: "CBoxArray") -> "CBoxArray":
        rlo, rhi = iv_add(self.rlo, self.rhi, o.rlo, o.rhi)
        ilo, ihi = iv_add(self.ilo, self.ihi, o.ilo, o.ihi)
        return CBoxArray(rlo, rhi, ilo, ihi)

    def add_const(self, c) -> "CBoxArray":
        crlo, crhi, cilo, cihi = c
        rlo, rhi = iv_add(self.rlo, self.rhi, crlo, crhi)
        ilo, ihi = iv_add(self.ilo, self.ihi, cilo, cihi)
        return CBoxArray(rlo, rhi, ilo, ihi)

    def mul(self, o: "CBoxArray") -> "CBoxArray":
        aclo, achi = iv_mul(self.rlo, self.rhi, o.rlo, o.rhi)
        bdlo, bdhi = iv_mul(self.ilo, self.ihi, o.ilo, o.ihi)
        adlo, adhi = iv_mul(self.rlo, self.rhi, o.ilo, o.ihi)
        bclo, bchi = iv_mul(self.ilo, self.ihi, o.rlo, o.rhi)
        rlo, rhi = iv_sub(aclo, achi, bdlo, bdhi)
        ilo, ihi = iv_add(adlo, adhi, bclo, bchi)
        return CBoxArray(rlo, rhi, ilo, ihi)

    def mag2(self):
        r2lo, r2hi = iv_sqr(self.rlo, self.rhi)
        i2lo, i2hi = iv_sqr(self.ilo, self.ihi)
        return iv_add(r2lo, r2hi, i2lo, i2hi)

    def abs_upper(self):
        _, m2hi = self.mag2()
        return _up(np.sqrt(m2hi))

    def abs_lower(self):
        m2lo, _ = self.mag2()
        return _dn(np.sqrt(np.maximum(m2lo, 0.0)))


def _qqi_quad(c: QQi):
    """Coefficient as exact-side-aware degenerate interval endpoints."""
    return (_flt_dn(c.re), _flt_up(c.re), _flt_dn(c.im), _flt_up(c.im))


class BatchPoly1:
    """Univariate QQi polynomial for batched box evaluation."""

    def __init__(self, poly):
        self.coeffs = [_qqi_quad(c) for c in poly.coeffs] or [(0.0, 0.0, 0.0, 0.0)]

    def eval(self, z: CBoxArray) -> CBoxArray:
        shape = z.rlo
        c = self.coeffs[-1]
        acc = CBoxArray(np.full_like(shape, c[0]), np.full_like(shape, c[1]),
                        np.full_like(shape, c[2]), np.full_like(shape, c[3]))
        for c in reversed(self.coeffs[:-1]):
            acc = acc.mul(z).add_const(c)
        return acc


class BatchPoly2:
    """(u, s) polynomial: outer Horner in u, inner Horner in s."""

    def __init__(self, poly_u):
        self.rows = []
        for sp in poly_u.coeffs:
            self.rows.append([_qqi_quad(c) for c in sp.coeffs])

    def eval(self, u: CBoxArray, s: CBoxArray) -> CBoxArray:
        shape = u.rlo
        zero = np.zeros_like(shape)
        acc = CBoxArray(zero.copy(), zero.copy(), zero.copy(), zero.copy())
        for row in reversed(self.rows):
            if row:
                c = row[-1]
                inner = CBoxArray(np.full_like(shape, c[0]), np.full_like(shape, c[1]),
                                  np.full_like(shape, c[2]), np.full_like(shape, c[3]))
                for c in reversed(row[:-1]):
                    inner = inner.mul(s).add_const(c)
            else:
                inner = CBoxArray(zero.copy(), zero.copy(), zero.copy(), zero.copy())
            acc = acc.mul(u).add(inner)
        return acc


def cbox_div(num: CBoxArray, den: CBoxArray):
    """num/den with per-box pole detection.

    Returns (result, ok_mask); entries with a denominator box containing
    zero have ok=False (their result values are unusable)."""
    m2lo, m2hi = den.mag2()
    ok = m2lo > 0.0
    safe_lo = np.where(ok, m2lo, 1.0)
    safe_hi = np.where(ok, m2hi, 1.0)
    prod = num.mul(CBoxArray(den.rlo, den.rhi, -den.ihi, -den.ilo))
    rlo, rhi = iv_div_pos(prod.rlo, prod.rhi, safe_lo, safe_hi)
    ilo, ihi = iv_div_pos(prod.ilo, prod.ihi, safe_lo, safe_hi)
    return CBoxArray(rlo, rhi, ilo, ihi), ok


def _expand(box: CBoxArray, radius) -> CBoxArray:
    """Outward expansion of each rectangle by a per-entry radius."""
    return CBoxArray(_dn(box.rlo - radius), _up(box.rhi + radius),
                     _dn(box.ilo - radius), _up(box.ihi + radius))


class BatchRatFunc1:
    """Mean-value-form enclosure of a rational function on imaginary-axis
    segments: value at the segment midpoint plus a derivative bound times
    the half-width.  First-order tight, so subdivision needs far fewer
    leaves than plain interval Horner."""

    def __init__(self, rf):
        self.num = BatchPoly1(rf.num)
        self.den = BatchPoly1(rf.den)
        self.dnum = BatchPoly1(rf.num.derivative())
        self.dden = BatchPoly1(rf.den.derivative())

    def abs_bounds_imag_axis(self, tlo, thi):
        """(sup, inf, ok) of |f(it)| over segments of the imaginary axis."""
        zero = np.zeros_like(tlo)
        z = CBoxArray(zero, zero.copy(), tlo, thi)
        tm = 0.5 * (tlo + thi)
        zm = CBoxArray(zero.copy(), zero.copy(), tm, tm.copy())
        half = _up(0.5 * _up(thi - tlo))
        n_enc = _expand(self.num.eval(zm), _up(self.dnum.eval(z).abs_upper() * half))
        d_enc = _expand(self.den.eval(zm), _up(self.dden.eval(z).abs_upper() * half))
        val, ok = cbox_div(n_enc, d_enc)
        return val.abs_upper(), val.abs_lower(), ok


class BatchRatFunc2:
    """Mean-value-form enclosure over (u, s) rectangles."""

    def __init__(self, num_u, den_u):
        self.num = BatchPoly2(num_u)
        self.den = BatchPoly2(den_u)
        self.num_du = BatchPoly2(_du(num_u))
        self.num_ds = BatchPoly2(_ds(num_u))
        self.den_du = BatchPoly2(_du(den_u))
        self.den_ds = BatchPoly2(_ds(den_u))

    def abs_bounds(self, ulo, uhi, slo, shi):
        zero = np.zeros_like(ulo)
        ub = CBoxArray(ulo, uhi, zero, zero.copy())
        sb = CBoxArray(slo, shi, np.zeros_like(slo), np.zeros_like(slo))
        um = 0.5 * (ulo + uhi)
        sm = 0.5 * (slo + shi)
        ubm = CBoxArray(um, um.copy(), zero.copy(), zero.copy())
        sbm = CBoxArray(sm, sm.copy(), np.zeros_like(sm), np.zeros_like(sm))
        hu = _up(0.5 * _up(uhi - ulo))
        hs = _up(0.5 * _up(shi - slo))
        rn = _up(_up(self.num_du.eval(ub, sb).abs_upper() * hu)
                 + _up(self.num_ds.eval(ub, sb).abs_upper() * hs))
        rd = _up(_up(self.den_du.eval(ub, sb).abs_upper() * hu)
                 + _up(self.den_ds.eval(ub, sb).abs_upper() * hs))
        n_enc = _expand(self.num.eval(ubm, sbm), rn)
        d_enc = _expand(self.den.eval(ubm, sbm), rd)
        val, ok = cbox_div(n_enc, d_enc)
        return val.abs_upper(), val.abs_lower(), ok

    def error_parts(self, ulo, uhi, slo, shi):
        """Per-axis contributions to the enclosure radius (split heuristic)."""
        zero = np.zeros_like(ulo)
        ub = CBoxArray(ulo, uhi, zero, zero.copy())
        sb = CBoxArray(slo, shi, np.zeros_like(slo), np.zeros_like(slo))
        hu = 0.5 * (uhi - ulo)
        hs = 0.5 * (shi - slo)
        eu = (self.num_du.eval(ub, sb).abs_upper()
              + self.den_du.eval(ub, sb).abs_upper()) * hu
        es = (self.num_ds.eval(ub, sb).abs_upper()
              + self.den_ds.eval(ub, sb).abs_upper()) * hs
        return eu, es


def _du(poly_u):
    return poly_u.derivative()


def _ds(poly_u):
    from .polys import Poly
    rows = [sp.derivative() for sp in poly_u.coeffs]
    return Poly(rows, poly_u.field)
