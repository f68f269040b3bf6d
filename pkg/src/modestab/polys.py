"""Generic dense polynomials and rational functions over an exact field.

The same `Poly`/`RatFunc` classes are instantiated at two levels:

* coefficients in `QQi`  -> polynomials/rational functions in one variable
  (used for the spectral parameter; aliases `PolyL`, `RatL`), and
* coefficients in `RatL` -> rational functions in a second variable whose
  coefficients are themselves rational in the spectral parameter
  (alias `BiRat`, used for ODE coefficients and for expressions rational in
  the recurrence index).

A `Field` descriptor supplies the zero/one constants so the classes stay
agnostic of the coefficient type.  Division and gcd require the coefficients
to form a field; pure polynomial pairs built with ``RatFunc(..., reduce=False)``
skip normalization (used where coefficients are only a ring).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegreeError, PoleError, UnresolvedFactor
from .gaussrat import QQi, rat_sqrt


class Field:
    """Minimal field descriptor: the constants Poly needs to mint elements."""

    def __init__(self, zero, one, name="", const_fn=None):
        self.zero = zero
        self.one = one
        self.name = name
        self._const_fn = const_fn

    def __repr__(self):
        return f"Field({self.name})"

    def const(self, x):
        """Coerce an int/Fraction/QQi into the field."""
        if isinstance(x, type(self.zero)):
            return x
        if self._const_fn is not None:
            return self._const_fn(x)
        return x


QQI_FIELD = Field(QQi(0), QQi(1), "QQi",
                  const_fn=lambda x: x if isinstance(x, QQi) else QQi(x))


class Poly:
    """Dense univariate polynomial, lowest degree first, trailing zeros stripped."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field):
        while coeffs and _is_zero(coeffs[-1]):
            coeffs = coeffs[:-1]
        self.coeffs = tuple(coeffs)
        self.field = field

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def const(c, field) -> "Poly":
        return Poly([field.const(c)], field)

    @staticmethod
    def zero(field) -> "Poly":
        return Poly([], field)

    @staticmethod
    def x(field) -> "Poly":
        return Poly([field.zero, field.one], field)

    # -- structure -------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k <= self.degree else self.field.zero

    def lead(self):
        if self.is_zero():
            raise DegreeError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)], self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] - other[k] for k in range(n)], self.field)

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.field)

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.field)

    def scale(self, c) -> "Poly":
        return Poly([a * c for a in self.coeffs], self.field)

    def shift_up(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly([self.field.zero] * k + list(self.coeffs), self.field)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other, self.field)

    # -- division (field coefficients) ------------------------------------------

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = Poly.zero(self.field)
        r = self
        dlead = other.lead()
        while not r.is_zero() and r.degree >= other.degree:
            c = r.lead() / dlead
            k = r.degree - other.degree
            t = Poly([self.field.zero] * k + [c], self.field)
            q = q + t
            r = r - t * other
        return q, r

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd via Euclid's algorithm."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a.scale(self.field.one / a.lead())

    def synth_div(self, root):
        """Divide by (x - root) in one Horner pass: (quotient, remainder)."""
        if self.is_zero():
            return self, self.field.zero
        n = self.degree
        q = [self.field.zero] * n
        acc = self.coeffs[n]
        for k in range(n - 1, -1, -1):
            q[k] = acc
            acc = self.coeffs[k] + root * acc
        return Poly(q, self.field), acc

    # -- calculus & evaluation -----------------------------------------------------

    def derivative(self) -> "Poly":
        return Poly([self.coeffs[k] * self.field.const(k)
                     for k in range(1, len(self.coeffs))], self.field)

    def eval(self, x, lift=None):
        """Horner evaluation; `lift` maps coefficients into the target ring."""
        if lift is None:
            lift = lambda c: c
        if self.is_zero():
            return lift(self.field.zero)
        acc = lift(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + lift(c)
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(x)) by Horner in the polynomial ring."""
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.const(c, self.field)
        return acc

    def shift_center(self, z0) -> "Poly":
        """Rewrite around a new center: returns p(z0 + w) as a polynomial in w."""
        inner = Poly([z0, self.field.one], self.field)
        return self.compose(inner)

    def conj_coeffs(self) -> "Poly":
        """Conjugate all (QQi) coefficients."""
        return Poly([c.conj() for c in self.coeffs], self.field)

    def even_part_as_poly(self):
        """For a polynomial with only even powers, return q with p(x)=q(x^2)."""
        if any(not _is_zero(c) for c in self.coeffs[1::2]):
            return None
        return Poly(list(self.coeffs[0::2]), self.field)

    def is_even(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs[1::2])

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        return "Poly(" + ", ".join(repr(c) for c in self.coeffs) + ")"


def _is_zero(c) -> bool:
    z = getattr(c, "is_zero", None)
    return z() if z is not None else not c


# ---------------------------------------------------------------------------
# Exact root extraction over the Gaussian rationals.
# ---------------------------------------------------------------------------

def _gaussian_int_divisors(c: QQi, limit=10**7):
    """All Gaussian-integer divisors of a nonzero Gaussian integer."""
    import math as _math
    N = int(c.abs2())
    if N > limit:
        raise UnresolvedFactor(f"divisor enumeration too large (norm {N})")
    divs = []
    r = _math.isqrt(N)
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            n = x * x + y * y
            if n == 0 or N % n:
                continue
            d = QQi(x, y)
            q = c / d
            if q.re.denominator == 1 and q.im.denominator == 1:
                divs.append(d)
    return divs


def exact_roots(poly: Poly):
    """Roots (with multiplicity) of a QQi polynomial, as a list of QQi.

    Linear factors are found by the rational-root search over Z[i]; a
    remaining quadratic factor is solved exactly when possible.  Raises
    UnresolvedFactor when an unfactored remainder of positive degree is left.
    """
    import math as _math
    if poly.degree < 1:
        return []
    denom = 1
    for c in poly.coeffs:
        denom = denom * c.re.denominator // _math.gcd(denom, c.re.denominator)
        denom = denom * c.im.denominator // _math.gcd(denom, c.im.denominator)
    work = poly.scale(QQi(denom))
    roots = []
    k = 0
    while k <= work.degree and work.coeffs[k].is_zero():
        k += 1
    roots.extend([QQi(0)] * k)
    if k:
        work = Poly(list(work.coeffs[k:]), QQI_FIELD)
    while work.degree >= 1:
        if work.degree == 1:
            roots.append(-work.coeffs[0] / work.coeffs[1])
            break
        c0, cm = work.coeffs[0], work.lead()
        found = None
        for a in _gaussian_int_divisors(c0):
            for b in _gaussian_int_divisors(cm):
                cand = a / b
                if work.eval(cand).is_zero():
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            if work.degree == 2:
                rts, exact, *_ = quadratic_roots(work)
                if exact:
                    roots.extend(rts)
                    return roots
            raise UnresolvedFactor(f"cannot factor remainder of degree {work.degree}")
        while work.degree >= 1 and work.eval(found).is_zero():
            roots.append(found)
            lin = Poly([-found, QQi(1)], QQI_FIELD)
            work, rem = work.divmod(lin)
            assert rem.is_zero()
    return roots


_ROOT_CACHE = {}


def _cached_roots(poly: Poly):
    key = poly.coeffs
    hit = _ROOT_CACHE.get(key)
    if hit is None:
        hit = exact_roots(poly)
        if len(_ROOT_CACHE) > 4096:
            _ROOT_CACHE.clear()
        _ROOT_CACHE[key] = hit
    return hit


def _nested_reduce(num: Poly, den: Poly):
    """Cancel common factors of a nested rational function by peeling the
    exact linear factors of the (parameter-free) denominator.  Falls back to
    the unreduced pair when the denominator cannot be factored this way."""
    field = num.field
    if num.is_zero():
        return num, Poly.const(field.one, field)
    if den.degree == 0:
        return num, den
    lead = den.lead()
    one = field.one
    if lead != one:
        inv = one / lead
        num = num.scale(inv)
        den = den.scale(inv)
    consts = []
    for c in den.coeffs:
        if not (hasattr(c, "is_constant") and c.is_constant()):
            return num, den
        consts.append(c.constant_value())
    try:
        roots = _cached_roots(Poly(consts, QQI_FIELD))
    except UnresolvedFactor:
        return num, den
    counts = {}
    order = []
    for r in roots:
        key = (r.re, r.im)
        if key not in counts:
            counts[key] = [r, 0]
            order.append(key)
        counts[key][1] += 1
    for key in order:
        r, mult = counts[key]
        rc = field.const(QQi(r.re, r.im))
        while mult > 0:
            q, rem = num.synth_div(rc)
            if not _is_zero(rem):
                break
            num = q
            den = den.synth_div(rc)[0]
            mult -= 1
    return num, den


class RatFunc:
    """Quotient of two Polys; reduced and denominator-monic when coefficients
    form a field (`reduce=True`), raw pair otherwise.

    At the scalar (QQi) level the reduction is a Euclidean gcd.  At the
    nested level (coefficients themselves rational functions) Euclid suffers
    catastrophic intermediate blowup, so reduction instead peels the exact
    linear factors of the denominator -- in this package denominators are
    always products of linear factors with parameter-free locations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            if isinstance(num.field.zero, QQi):
                if num.degree >= 1 and den.degree >= 1:
                    g = num.gcd(den)
                    if g.degree >= 1:
                        num = num.divmod(g)[0]
                        den = den.divmod(g)[0]
            else:
                num, den = _nested_reduce(num, den)
            lead = den.lead()
            one = num.field.one
            if lead != one:
                inv = one / lead
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def const(c, field) -> "RatFunc":
        return RatFunc(Poly.const(c, field), Poly.const(field.one, field))

    @staticmethod
    def zero(field) -> "RatFunc":
        return RatFunc(Poly.zero(field), Poly.const(field.one, field))

    @staticmethod
    def x(field) -> "RatFunc":
        return RatFunc(Poly.x(field), Poly.const(field.one, field))

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p, Poly.const(p.field.one, p.field))

    @property
    def field(self):
        return self.num.field

    # -- predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self):
        if not self.is_constant():
            raise DegreeError("not a constant rational function")
        if self.num.is_zero():
            return self.field.zero
        return self.num.coeffs[0] / self.den.coeffs[0]

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc) and isinstance(other.num.field.zero,
                                                     type(self.field.zero)):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        return RatFunc.const(self.field.const(other), self.field)

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den - other.num * self.den,
                       self.den * other.den)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def derivative(self) -> "RatFunc":
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(),
                       self.den * self.den)

    # -- evaluation ------------------------------------------------------------------

    def eval(self, x, lift=None):
        """Exact value at x; PoleError when the denominator vanishes."""
        den = self.den.eval(x, lift)
        if _is_zero(den):
            raise PoleError(f"pole at {x!r}")
        return self.num.eval(x, lift) / den

    def compose_poly(self, inner: Poly) -> "RatFunc":
        return RatFunc(self.num.compose(inner), self.den.compose(inner))

    def compose_mobius(self, a, b, c, d) -> "RatFunc":
        """Substitute x -> (a x + b)/(c x + d) exactly."""
        f = self.field
        top = Poly([b, a], f)
        bot = Poly([d, c], f)
        dn, dd = self.num.degree, self.den.degree
        m = max(dn, dd, 0)

        def clear(p: Poly) -> Poly:
            acc = Poly.zero(f)
            # sum p_k top^k bot^(m-k)
            tp = Poly.const(f.one, f)
            pows = []
            for _ in range(p.degree + 1):
                pows.append(tp)
                tp = tp * top
            bt = Poly.const(f.one, f)
            bpows = [bt]
            for _ in range(m):
                bt = bt * bot
                bpows.append(bt)
            for k in range(p.degree + 1):
                acc = acc + (pows[k] * bpows[m - k]).scale(p.coeffs[k])
            return acc

        return RatFunc(clear(self.num), clear(self.den))

    def conj_coeffs(self) -> "RatFunc":
        return RatFunc(self.num.conj_coeffs(), self.den.conj_coeffs(), reduce=False)

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


# ---------------------------------------------------------------------------
# The concrete tower used throughout the package.
# ---------------------------------------------------------------------------

PolyL = Poly          # polynomial in the spectral parameter, QQi coefficients
RatL = RatFunc        # rational in the spectral parameter


def lam_poly(*coeffs) -> Poly:
    """Polynomial in the spectral parameter from int/Fraction/QQi coefficients,
    lowest degree first."""
    return Poly([c if isinstance(c, QQi) else QQi(c) for c in coeffs], QQI_FIELD)


def lam_ratfunc(num_coeffs, den_coeffs=(1,)) -> RatFunc:
    return RatFunc(lam_poly(*num_coeffs), lam_poly(*den_coeffs))


LAM = RatFunc.x(QQI_FIELD)


def lam_const(x) -> RatFunc:
    """Constant element of the spectral-parameter field."""
    return RatFunc.const(x if isinstance(x, QQi) else QQi(x), QQI_FIELD)


L_FIELD = Field(RatFunc.zero(QQI_FIELD), RatFunc.const(QQi(1), QQI_FIELD),
                "QQi(lam)", const_fn=lam_const)


BiRat = RatFunc       # rational in a second variable, RatL coefficients


def z_poly(*coeffs) -> Poly:
    """Polynomial in the outer variable; coefficients coerced into RatL."""
    out = []
    for c in coeffs:
        if isinstance(c, RatFunc):
            out.append(c)
        elif isinstance(c, Poly):
            out.append(RatFunc.from_poly(c))
        else:
            out.append(lam_const(c))
    return Poly(out, L_FIELD)


def z_ratfunc(num_coeffs, den_coeffs=(1,)) -> RatFunc:
    return RatFunc(z_poly(*num_coeffs), z_poly(*den_coeffs))


Z = RatFunc.x(L_FIELD)


def birat_eval_z(f: RatFunc, z0) -> RatFunc:
    """Evaluate a BiRat at an exact outer-variable value; returns a RatL."""
    z0 = lam_const(z0) if not isinstance(z0, RatFunc) else z0
    den = f.den.eval(z0)
    if den.is_zero():
        raise PoleError(f"outer-variable pole at {z0!r}")
    return f.num.eval(z0) / den


def birat_eval_lambda(f: RatFunc, lam: QQi) -> RatFunc:
    """Partially evaluate the spectral parameter; returns a rational function
    of the outer variable with QQi coefficients."""
    def ev(poly: Poly) -> Poly:
        return Poly([c.eval(lam) for c in poly.coeffs], QQI_FIELD)
    num = ev(f.num)
    den = ev(f.den)
    return RatFunc(num, den)


def quadratic_roots(p: Poly):
    """Both roots of a degree-2 polynomial over QQi.

    Returns (roots, exact) where roots is a pair of QQi (exact=True) or a
    pair of complex floats together with a certified residual bound
    (exact=False, third element).  Exact whenever the discriminant has an
    exact Gaussian-rational square root.
    """
    if p.degree != 2:
        raise DegreeError(f"expected degree 2, got {p.degree}")
    c, b, a = p.coeffs[0], p.coeffs[1], p.coeffs[2]
    disc = b * b - QQi(4) * a * c
    s = disc.sqrt_exact()
    if s is not None:
        r1 = (-b + s) / (QQi(2) * a)
        r2 = (-b - s) / (QQi(2) * a)
        return (r1, r2), True
    # float fallback with a residual bound
    import cmath
    af, bf, cf = a.to_complex(), b.to_complex(), c.to_complex()
    sq = cmath.sqrt(bf * bf - 4 * af * cf)
    # stable pairing: avoid cancellation in the larger root
    if (bf.conjugate() * sq).real >= 0:
        sq = -sq
    r1 = (-bf + sq) / (2 * af)
    r2 = cf / (af * r1) if r1 != 0 else (-bf - sq) / (2 * af)
    resid = max(abs(af * r * r + bf * r + cf) for r in (r1, r2))
    return (r1, r2), False, resid


def real_coeff_fractions(p: Poly):
    """Coefficients of a QQi polynomial as Fractions; None if any is non-real."""
    out = []
    for c in p.coeffs:
        if not c.is_real():
            return None
        out.append(c.re)
    return out
