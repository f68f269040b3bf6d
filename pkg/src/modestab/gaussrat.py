"""Exact scalars: arbitrary-precision rationals and Gaussian rationals.

Plain rationals are `fractions.Fraction` (aliased `Rat`), which already
maintains the reduced-form/positive-denominator invariants.  `QQi` is a
complex number with `Rat` real and imaginary parts; it is the coefficient
field for all exact polynomial arithmetic in the package.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

Rat = Fraction


def rat_str(x: Rat) -> str:
    """Serialize a rational as "p/q" (or "p" for integers)."""
    return str(x)


def rat_parse(s: str) -> Rat:
    return Fraction(s.strip())


def _isqrt_exact(n: int):
    """Integer square root, or None when n is not a perfect square."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def rat_sqrt(x: Rat):
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    p = _isqrt_exact(x.numerator)
    q = _isqrt_exact(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


class QQi:
    """Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    # -- ring/field structure ------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return QQi(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce(other)
        return QQi(self.re * other.re - self.im * other.im,
                   self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        n2 = other.abs2()
        if n2 == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi((self.re * other.re + self.im * other.im) / n2,
                   (other.re * self.im - self.re * other.im) / n2)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return QQi(1) / self ** (-k)
        out = QQi(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    # -- helpers --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def conj(self) -> "QQi":
        return QQi(self.re, -self.im)

    def abs2(self) -> Rat:
        return self.re * self.re + self.im * self.im

    def abs_upper(self) -> Rat:
        """Rational upper bound on the modulus (|re|+|im|)."""
        return abs(self.re) + abs(self.im)

    def abs_lower(self) -> Rat:
        """Rational lower bound on the modulus (max(|re|,|im|))."""
        return max(abs(self.re), abs(self.im))

    def sqrt_exact(self):
        """Exact Gaussian-rational square root, or None if it does not exist."""
        m = rat_sqrt(self.abs2())
        if m is None:
            return None
        # (p + qi)^2 = re + im*i  =>  p^2 = (re + |z|)/2, q = im/(2p)
        p2 = (self.re + m) / 2
        p = rat_sqrt(p2)
        if p is None:
            return None
        if p == 0:
            q2 = -self.re
            q = rat_sqrt(q2)
            if q is None:
                return None
            return QQi(0, q)
        return QQi(p, self.im / (2 * p))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return rat_str(self.re)
        if not self.re:
            return f"{rat_str(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{rat_str(self.re)}{sign}{rat_str(abs(self.im))}i"


def _coerce(x) -> QQi:
    if isinstance(x, QQi):
        return x
    if isinstance(x, (int, Fraction)):
        return QQi(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to QQi")


_GAUSS_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*"
    r"(?P<im>[+-](?:\d+(?:/\d+)?)?)?\s*(?P<i>i)?\s*$"
)


def qqi_parse(s: str) -> QQi:
    """Parse strings like "3/7", "-2", "i", "1/2+3i", "1-2/5i"."""
    s = s.strip().replace(" ", "")
    if not s:
        raise ValueError("empty Gaussian rational")
    if s.endswith("i"):
        body = s[:-1]
        # split off the trailing (imaginary) term
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "+-/":
                re_part, im_part = body[:k], body[k:]
                break
        else:
            re_part, im_part = "", body
        if im_part in ("", "+"):
            im = Fraction(1)
        elif im_part == "-":
            im = Fraction(-1)
        else:
            im = Fraction(im_part)
        return QQi(Fraction(re_part) if re_part else Fraction(0), im)
    return QQi(Fraction(s))


ZERO = QQi(0)
ONE = QQi(1)
I = QQi(0, 1)
