"""Rigorous interval arithmetic: directed-rounded real intervals and
rectangular complex boxes.

Every primitive IEEE operation with round-to-nearest lands within 0.5 ulp of
the exact result, so widening each computed endpoint by one ulp (via
`math.nextafter`) yields a conservative enclosure.  Conversions from exact
rationals compare back exactly to decide which side needs widening, so
representable values stay degenerate.

A second, exact flavor (`RatInterval`) with Fraction endpoints and no
rounding is used internally where exact lower bounds are required (tail
coefficient estimates); the float boxes are the workhorse for subdivision.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PossiblePole
from .gaussrat import QQi, Rat

_INF = math.inf


def _dn(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _flt_dn(x: Fraction) -> float:
    """Largest float <= x."""
    f = float(x)
    if math.isinf(f):
        return math.copysign(1.7976931348623157e308, f) if f > 0 else f
    return f if Fraction(f) <= x else _dn(f)


def _flt_up(x: Fraction) -> float:
    """Smallest float >= x."""
    f = float(x)
    if math.isinf(f):
        return f if f > 0 else -1.7976931348623157e308
    return f if Fraction(f) >= x else _up(f)


class Iv:
    """Closed real interval [lo, hi] with outward-rounded arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float):
        self.lo = lo
        self.hi = hi

    @staticmethod
    def point(x: float) -> "Iv":
        return Iv(x, x)

    @staticmethod
    def from_rat(x) -> "Iv":
        x = Fraction(x)
        return Iv(_flt_dn(x), _flt_up(x))

    @staticmethod
    def hull(a: float, b: float) -> "Iv":
        return Iv(min(a, b), max(a, b))

    def __add__(self, o: "Iv") -> "Iv":
        return Iv(_dn(self.lo + o.lo), _up(self.hi + o.hi))

    def __sub__(self, o: "Iv") -> "Iv":
        return Iv(_dn(self.lo - o.hi), _up(self.hi - o.lo))

    def __neg__(self) -> "Iv":
        return Iv(-self.hi, -self.lo)

    def __mul__(self, o: "Iv") -> "Iv":
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Iv(_dn(min(p)), _up(max(p)))

    def __truediv__(self, o: "Iv") -> "Iv":
        if o.lo <= 0.0 <= o.hi:
            raise PossiblePole("interval division by interval containing 0")
        p = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Iv(_dn(min(p)), _up(max(p)))

    def sqr(self) -> "Iv":
        lo, hi = abs(self.lo), abs(self.hi)
        m, M = min(lo, hi), max(lo, hi)
        if self.lo <= 0.0 <= self.hi:
            return Iv(0.0, _up(M * M))
        return Iv(_dn(m * m), _up(M * M))

    def abs(self) -> "Iv":
        if self.lo >= 0:
            return Iv(self.lo, self.hi)
        if self.hi <= 0:
            return Iv(-self.hi, -self.lo)
        return Iv(0.0, max(-self.lo, self.hi))

    def sqrt_upper(self) -> float:
        return _up(math.sqrt(self.hi))

    def sqrt_lower(self) -> float:
        if self.lo <= 0:
            return 0.0
        return _dn(math.sqrt(self.lo))

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_iv(self, o: "Iv") -> bool:
        return self.lo <= o.lo and o.hi <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


class ComplexBox:
    """Axis-aligned rectangle {re + i*im : re in [re], im in [im]}."""

    __slots__ = ("re", "im")

    def __init__(self, re: Iv, im: Iv):
        self.re = re
        self.im = im

    @staticmethod
    def from_corners(re_lo, re_hi, im_lo, im_hi) -> "ComplexBox":
        return ComplexBox(Iv(re_lo, re_hi), Iv(im_lo, im_hi))

    @staticmethod
    def point(z: complex) -> "ComplexBox":
        return ComplexBox(Iv.point(z.real), Iv.point(z.imag))

    @staticmethod
    def from_qqi(z: QQi) -> "ComplexBox":
        return ComplexBox(Iv.from_rat(z.re), Iv.from_rat(z.im))

    @staticmethod
    def real_segment(lo: float, hi: float) -> "ComplexBox":
        return ComplexBox(Iv(lo, hi), Iv.point(0.0))

    @staticmethod
    def imag_segment(lo: float, hi: float) -> "ComplexBox":
        """The segment {i*t : t in [lo, hi]} of the imaginary axis."""
        return ComplexBox(Iv.point(0.0), Iv(lo, hi))

    def __add__(self, o: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "ComplexBox":
        return ComplexBox(-self.re, -self.im)

    def __mul__(self, o: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re * o.re - self.im * o.im,
                          self.re * o.im + self.im * o.re)

    def conj(self) -> "ComplexBox":
        return ComplexBox(self.re, -self.im)

    def mag2(self) -> Iv:
        return self.re.sqr() + self.im.sqr()

    def __truediv__(self, o: "ComplexBox") -> "ComplexBox":
        m2 = o.mag2()
        if m2.lo <= 0.0:
            raise PossiblePole("denominator box may contain 0")
        num = self * o.conj()
        return ComplexBox(num.re / m2, num.im / m2)

    def abs_upper(self) -> float:
        """Certified upper bound for sup |z| over the box."""
        m = self.re.sqr() + self.im.sqr()
        return m.sqrt_upper()

    def abs_lower(self) -> float:
        """Certified lower bound for inf |z| over the box."""
        m = self.re.sqr() + self.im.sqr()
        return m.sqrt_lower()

    def contains(self, z: complex) -> bool:
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def contains_box(self, o: "ComplexBox") -> bool:
        return self.re.contains_iv(o.re) and self.im.contains_iv(o.im)

    def contains_zero(self) -> bool:
        return self.re.contains(0.0) and self.im.contains(0.0)

    @property
    def width(self) -> float:
        return max(self.re.width, self.im.width)

    @property
    def mid(self) -> complex:
        return complex(self.re.mid, self.im.mid)

    def split(self):
        """Bisect along the widest axis."""
        if self.re.width >= self.im.width:
            m = self.re.mid
            return (ComplexBox(Iv(self.re.lo, m), self.im),
                    ComplexBox(Iv(m, self.re.hi), self.im))
        m = self.im.mid
        return (ComplexBox(self.re, Iv(self.im.lo, m)),
                ComplexBox(self.re, Iv(m, self.im.hi)))

    def hex_quad(self):
        return [self.re.lo.hex(), self.re.hi.hex(), self.im.lo.hex(), self.im.hi.hex()]

    @staticmethod
    def from_hex_quad(q) -> "ComplexBox":
        return ComplexBox(Iv(float.fromhex(q[0]), float.fromhex(q[1])),
                          Iv(float.fromhex(q[2]), float.fromhex(q[3])))

    def __repr__(self):
        return f"Box(re={self.re}, im={self.im})"


# ---------------------------------------------------------------------------
# Compiled evaluation of exact rational functions on boxes.
# ---------------------------------------------------------------------------

class BoxPoly:
    """QQi polynomial precompiled to coefficient boxes for Horner evaluation."""

    __slots__ = ("coeffs",)

    def __init__(self, poly):
        self.coeffs = [ComplexBox.from_qqi(c) for c in poly.coeffs]

    def eval(self, z: ComplexBox) -> ComplexBox:
        if not self.coeffs:
            return ComplexBox.point(0j)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc


class BoxRatFunc:
    """RatL precompiled for repeated box enclosure."""

    __slots__ = ("num", "den")

    def __init__(self, rf):
        self.num = BoxPoly(rf.num)
        self.den = BoxPoly(rf.den)

    def enclose(self, z: ComplexBox) -> ComplexBox:
        return self.num.eval(z) / self.den.eval(z)


class BoxPoly2:
    """Bivariate polynomial (outer variable u, inner variable s) compiled to
    nested coefficient boxes; coefficients of u^k are polynomials in s."""

    __slots__ = ("rows",)

    def __init__(self, upoly):
        # upoly: Poly in u whose coefficients are Poly in s over QQi
        self.rows = [[ComplexBox.from_qqi(c) for c in sp.coeffs] for sp in upoly.coeffs]

    def eval(self, u: ComplexBox, s: ComplexBox) -> ComplexBox:
        zero = ComplexBox.point(0j)
        acc = zero
        for row in reversed(self.rows):
            if row:
                inner = row[-1]
                for c in reversed(row[:-1]):
                    inner = inner * s + c
            else:
                inner = zero
            acc = acc * u + inner
        return acc


class BoxRatFunc2:
    __slots__ = ("num", "den")

    def __init__(self, num_upoly, den_upoly):
        self.num = BoxPoly2(num_upoly)
        self.den = BoxPoly2(den_upoly)

    def enclose(self, u: ComplexBox, s: ComplexBox) -> ComplexBox:
        return self.num.eval(u, s) / self.den.eval(u, s)


def enclose_ratfunc(rf, box: ComplexBox) -> ComplexBox:
    """Enclosure of a RatL over a complex box (one-shot convenience)."""
    return BoxRatFunc(rf).enclose(box)


# ---------------------------------------------------------------------------
# Exact rational intervals (no rounding): used for exact positivity bounds.
# ---------------------------------------------------------------------------

class RatInterval:
    """Closed interval with Fraction endpoints; exact arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)

    def __add__(self, o):
        return RatInterval(self.lo + o.lo, self.hi + o.hi)

    def __mul__(self, o):
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RatInterval(min(p), max(p))

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def abs_lower(self) -> Rat:
        if self.contains_zero():
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def rat_poly_range(coeffs, lo, hi) -> RatInterval:
    """Exact interval Horner bound for a real-rational polynomial on [lo, hi]."""
    x = RatInterval(lo, hi)
    acc = RatInterval(0, 0)
    for c in reversed(coeffs):
        acc = acc * x + RatInterval(c, c)
    return acc


def rat_poly_abs_lower(coeffs, lo, hi, max_depth=24) -> Rat:
    """Exact positive lower bound for |p| on [lo, hi] by bisection.

    Returns 0 if the bound cannot be established within the depth budget
    (in particular whenever p vanishes on the interval).
    """
    stack = [(Fraction(lo), Fraction(hi), 0)]
    best = None
    while stack:
        a, b, d = stack.pop()
        rng = rat_poly_range(coeffs, a, b)
        if rng.contains_zero():
            if d >= max_depth:
                return Fraction(0)
            m = (a + b) / 2
            stack.append((a, m, d + 1))
            stack.append((m, b, d + 1))
            continue
        lb = rng.abs_lower()
        best = lb if best is None else min(best, lb)
    return best if best is not None else Fraction(0)
