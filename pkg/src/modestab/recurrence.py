"""Three-term coefficient recurrences for Heun-form equations.

`derive_recurrence` turns a Heun-form ODE into the recurrence
a_{n+2} = A_n a_{n+1} + B_n a_n by balancing powers of z after clearing
denominators; A and B are exact bivariate rational functions of the index
and the spectral parameter.  Evaluators produce coefficient and ratio
sequences exactly (Gaussian rationals) or in floating point, and a
Poincare-type classifier decides which root of the limiting characteristic
polynomial the ratios approach.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (HypothesisViolation, NotHeunForm, OverflowInFloatMode,
                     ZeroCoefficient)
from .fuchsian import ParamODE
from .gaussrat import QQi
from .polys import (L_FIELD, QQI_FIELD, Poly, RatFunc, birat_eval_lambda,
                    birat_eval_z, exact_roots, lam_const, lam_ratfunc, z_poly)


@dataclass
class RecurrenceSystem:
    """a_{n+2} = A_n a_{n+1} + B_n a_n with a_{-1}=0, a_0=1."""

    A: RatFunc          # bivariate: rational in the index, coefficients RatL
    B: RatFunc
    name: str = ""

    def A_at(self, n) -> RatFunc:
        return birat_eval_z(self.A, QQi(n))

    def B_at(self, n) -> RatFunc:
        return birat_eval_z(self.B, QQi(n))

    def limits(self):
        """Exact limits of A_n and B_n as n -> infinity (degrees must match)."""
        out = []
        for f in (self.A, self.B):
            if f.num.degree != f.den.degree:
                out.append(None if f.num.degree < f.den.degree else "inf")
                if f.num.degree < f.den.degree:
                    out[-1] = RatFunc.zero(QQI_FIELD)
                continue
            out.append(f.num.lead() / f.den.lead())
        return tuple(out)

    def limit_char_roots(self):
        """Roots of s^2 - A_inf s - B_inf as exact constants."""
        A_inf, B_inf = self.limits()
        a = A_inf.constant_value() if A_inf.is_constant() else None
        b = B_inf.constant_value() if B_inf.is_constant() else None
        if a is None or b is None:
            raise NotHeunForm("limit coefficients are not constant")
        poly = Poly([-b, -a, QQi(1)], QQI_FIELD)
        return exact_roots(poly)


def derive_recurrence(heun: ParamODE, name="") -> RecurrenceSystem:
    """Coefficient recurrence of the power-series solution at z = 0.

    Requires the cleared form z(z-1)(z-a) g'' + pi1(z) g' + pi0(z) g = 0 with
    deg pi1 <= 2 and deg pi0 <= 1 (Heun normal form at the origin).
    """
    dp, dq = heun.p.den, heun.q.den
    g = dp.gcd(dq)
    D = dp * dq.divmod(g)[0]          # lcm of the two denominators
    pi2 = D
    r1 = heun.p * RatFunc.from_poly(D)
    r0 = heun.q * RatFunc.from_poly(D)
    if r1.den.degree != 0 or r0.den.degree != 0:
        raise NotHeunForm("coefficients do not clear against the common denominator")
    pi1 = r1.num.scale(L_FIELD.one / r1.den.coeffs[0])
    pi0 = r0.num.scale(L_FIELD.one / r0.den.coeffs[0])
    if pi2.degree != 3 or not pi2[0].is_zero():
        raise NotHeunForm("leading coefficient is not of the form z(z-1)(z-a)")
    if pi1.degree > 2 or pi0.degree > 1:
        raise NotHeunForm("lower-order coefficients exceed Heun degrees")
    c1, c2, c3 = pi2[1], pi2[2], pi2[3]
    d0, d1, d2 = pi1[0], pi1[1], pi1[2]
    e0, e1 = pi0[0], pi0[1]
    one = L_FIELD.one

    def npoly(c0, cc1, cc2):
        return Poly([c0, cc1, cc2], L_FIELD)

    den = npoly(2 * (c1 + d0), 3 * c1 + d0, c1)
    a_num = npoly(-(d1 + e0), -(c2 + d1), -c2)
    b_num = npoly(-e1, c3 - d2, -c3)
    A = RatFunc(a_num, den)
    B = RatFunc(b_num, den)
    return RecurrenceSystem(A, B, name=name or heun.name)


def displayed_recurrence() -> RecurrenceSystem:
    """The closed-form recurrence of the final Heun equation:
    A_n = (12n^2 + (8 lam + 56) n + lam^2 + 20 lam + 56) / (8n^2 + 52n + 72),
    B_n = -(4n^2 + (4 lam + 12) n + lam^2 + 6 lam + 8) / (8n^2 + 52n + 72).
    """
    den = z_poly(72, 52, 8)
    a_num = z_poly(lam_ratfunc([56, 20, 1]), lam_ratfunc([56, 8]), lam_ratfunc([12]))
    b_num = z_poly(lam_ratfunc([-8, -6, -1]), lam_ratfunc([-12, -4]), lam_ratfunc([-4]))
    return RecurrenceSystem(RatFunc(a_num, den), RatFunc(b_num, den),
                            name="specssHeun")


# ---------------------------------------------------------------------------
# Coefficient and ratio sequences.
# ---------------------------------------------------------------------------

_OVERFLOW = 1e280


def _lam_evaluated(rec: RecurrenceSystem, lam: QQi):
    """(A, B) as rational functions of the index only, exact at lam."""
    return (birat_eval_lambda(rec.A, lam), birat_eval_lambda(rec.B, lam))


def coefficients(rec: RecurrenceSystem, lam, N: int, mode: str = "exact"):
    """a_0 .. a_N of the recurrence, exact (QQi) or floating (complex)."""
    if mode == "exact":
        lamq = lam if isinstance(lam, QQi) else QQi(lam)
        Af, Bf = _lam_evaluated(rec, lamq)
        prev, cur = QQi(0), QQi(1)       # a_{-1}, a_0
        out = [cur]
        for n in range(-1, N - 1):
            nq = QQi(n)
            an = Af.eval(nq)
            bn = Bf.eval(nq)
            prev, cur = cur, an * cur + bn * prev
            out.append(cur)
        return out
    lamc = complex(lam)
    Anum, Aden = _complex_compiled(rec.A, lamc)
    Bnum, Bden = _complex_compiled(rec.B, lamc)
    prev, cur = 0j, 1 + 0j
    out = [cur]
    for n in range(-1, N - 1):
        an = _polyval(Anum, n) / _polyval(Aden, n)
        bn = _polyval(Bnum, n) / _polyval(Bden, n)
        prev, cur = cur, an * cur + bn * prev
        if abs(cur.real) > _OVERFLOW or abs(cur.imag) > _OVERFLOW:
            raise OverflowInFloatMode(f"|a_{n + 2}| > {_OVERFLOW:g}")
        out.append(cur)
    return out


def _complex_compiled(f: RatFunc, lamc: complex):
    num = [c.eval(lamc, lift=lambda x: x.to_complex()) for c in f.num.coeffs]
    den = [c.eval(lamc, lift=lambda x: x.to_complex()) for c in f.den.coeffs]
    return num, den


def _polyval(coeffs, x):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass
class RatioSequence:
    """r_n = a_{n+1}/a_n with definedness tracking."""

    values: list
    defined: list
    lam: object
    mode: str
    first_zero: int | None = None

    def last_defined(self):
        for v, d in zip(reversed(self.values), reversed(self.defined)):
            if d:
                return v
        return None


def ratios(rec: RecurrenceSystem, lam, N: int, mode: str = "float") -> RatioSequence:
    """r_0 .. r_N via the ratio recursion r_{n+1} = A_n + B_n / r_n.

    A vanishing coefficient makes the ratio undefined from that index on;
    the first such index is recorded (ZeroCoefficient semantics).
    """
    if mode == "exact":
        lamq = lam if isinstance(lam, QQi) else QQi(lam)
        Af, Bf = _lam_evaluated(rec, lamq)
        r = Af.eval(QQi(-1))
        values, defined = [r], [True]
        first_zero = None
        for n in range(0, N):
            if first_zero is not None:
                values.append(None)
                defined.append(False)
                continue
            if r.is_zero():
                first_zero = n
                values.append(None)
                defined.append(False)
                continue
            r = Af.eval(QQi(n)) + Bf.eval(QQi(n)) / r
            values.append(r)
            defined.append(True)
        return RatioSequence(values, defined, lamq, "exact", first_zero)
    lamc = complex(lam)
    Anum, Aden = _complex_compiled(rec.A, lamc)
    Bnum, Bden = _complex_compiled(rec.B, lamc)
    r = _polyval(Anum, -1) / _polyval(Aden, -1)
    values, defined = [r], [True]
    first_zero = None
    for n in range(0, N):
        if first_zero is not None:
            values.append(None)
            defined.append(False)
            continue
        if r == 0:
            first_zero = n
            values.append(None)
            defined.append(False)
            continue
        r = _polyval(Anum, n) / _polyval(Aden, n) \
            + (_polyval(Bnum, n) / _polyval(Bden, n)) / r
        values.append(r)
        defined.append(True)
    return RatioSequence(values, defined, lamc, "float", first_zero)


def poincare_classify(seq: RatioSequence, roots):
    """Classify the ratio limit against the two limiting characteristic roots.

    Declares convergence to a root z when |r_n - z| < |z1 - z2|/4 throughout
    the last 10% of the defined indices; "terminating" when the sequence hit
    a zero coefficient and stayed undefined; "inconclusive(N)" otherwise.
    The margin only needs to separate the two candidates, which is what the
    dichotomy provides.
    """
    z1, z2 = (complex(roots[0].to_complex() if isinstance(roots[0], QQi) else roots[0]),
              complex(roots[1].to_complex() if isinstance(roots[1], QQi) else roots[1]))
    if abs(abs(z1) - abs(z2)) < 1e-15:
        raise HypothesisViolation("limit roots have equal modulus")
    if seq.first_zero is not None and not any(seq.defined[seq.first_zero + 1:]):
        return {"kind": "terminating", "index": seq.first_zero}
    vals = [complex(v.to_complex() if isinstance(v, QQi) else v)
            for v, d in zip(seq.values, seq.defined) if d]
    N = len(vals)
    tail = vals[max(0, N - max(1, N // 10)):]
    margin = abs(z1 - z2) / 4
    for z, label in ((z1, "z1"), (z2, "z2")):
        if all(abs(v - z) < margin for v in tail):
            return {"kind": f"converges-to-{label}", "limit": z, "margin": margin,
                    "N": N}
    return {"kind": "inconclusive", "N": N}


def polynomial_solution_test(rec: RecurrenceSystem, lam):
    """Degrees at which a polynomial solution could truncate.

    A degree-N polynomial solution forces B_N(lam) = 0, so the candidates are
    the nonnegative-integer roots (in the index) of the numerator of B at the
    given spectral value.  Returns {"impossible": True} when there are none.
    """
    lamq = lam if isinstance(lam, QQi) else QQi(lam)
    Bn = birat_eval_lambda(rec.B, lamq)
    candidates = []
    for root in exact_roots(Bn.num):
        if root.is_real() and root.re.denominator == 1 and root.re >= 0:
            candidates.append(int(root.re))
    if not candidates:
        return {"impossible": True, "candidate_degrees": []}
    return {"impossible": False, "candidate_degrees": sorted(candidates)}
