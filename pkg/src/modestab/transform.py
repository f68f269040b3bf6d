"""Exact ODE transformations: gauge multipliers, power substitution,
Moebius maps, and the SUSY (Darboux) step, plus the verified chain that
connects the registered spectral equations.

All transformations act on normalized equations f'' + p f' + q f = 0 and
return normalized equations; every identity is exact in (z, lambda).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .equations import ONE, Z, build_registry, eq_spec_raw, normalize, \
    ground_state_log_derivative
from .errors import MismatchError, NotCompatible, NotSchrodingerForm
from .fuchsian import INFINITY, ParamODE, fuchs_check
from .gaussrat import QQi
from .polys import (L_FIELD, QQI_FIELD, Poly, RatFunc, lam_const,
                    lam_ratfunc, z_poly)


# ---------------------------------------------------------------------------
# Gauge factors w(z) = prod (z - z_i)^(mu_i).
# ---------------------------------------------------------------------------

class GaugeFactor:
    """Product of powers of linear factors; only the logarithmic derivative
    (which is rational) ever enters the transformed coefficients, so the
    exponents may be rational in the spectral parameter."""

    def __init__(self, factors):
        # factors: iterable of (point, exponent); exponent int/Fraction/RatL
        self.factors = [(p if isinstance(p, QQi) else QQi(p),
                         e if isinstance(e, RatFunc) else lam_const(QQi(e)))
                        for p, e in factors]

    def log_derivative(self) -> RatFunc:
        acc = RatFunc.zero(L_FIELD)
        for point, expo in self.factors:
            lin = RatFunc.from_poly(z_poly(-lam_const(point), 1))
            acc = acc + RatFunc.const(expo, L_FIELD) / lin
        return acc

    def inverse(self) -> "GaugeFactor":
        return GaugeFactor([(p, RatFunc.zero(QQI_FIELD) - e) for p, e in self.factors])

    def compose(self, other: "GaugeFactor") -> "GaugeFactor":
        """Pointwise exponent addition (the group law)."""
        table = {}
        for p, e in self.factors + other.factors:
            key = (p.re, p.im)
            if key in table:
                table[key] = (p, table[key][1] + e)
            else:
                table[key] = (p, e)
        return GaugeFactor([(p, e) for p, e in table.values() if not e.is_zero()])

    def is_trivial(self) -> bool:
        return all(e.is_zero() for _, e in self.factors)


def gauge(ode: ParamODE, g: GaugeFactor) -> ParamODE:
    """Equation satisfied by h where f = w(z) h(z).

    p_new = p + 2 w'/w,  q_new = q + p w'/w + w''/w  with
    w''/w = (w'/w)' + (w'/w)^2.
    """
    L = g.log_derivative()
    p_new = ode.p + 2 * L
    q_new = ode.q + ode.p * L + (L.derivative() + L * L)
    log = ode.gauge_log + tuple((p, e) for p, e in g.factors)
    return ParamODE(p_new, q_new, gauge_log=log, name=ode.name + "+gauge")


# ---------------------------------------------------------------------------
# Power substitution x = z^k.
# ---------------------------------------------------------------------------

def _poly_flip(p: Poly) -> Poly:
    """p(-z)."""
    return Poly([c if k % 2 == 0 else -c for k, c in enumerate(p.coeffs)], p.field)


def _poly_halve(p: Poly) -> Poly:
    return Poly(list(p.coeffs[0::2]), p.field)


def _as_even(r: RatFunc) -> RatFunc:
    """Rewrite an even rational function of z as a rational function of x=z^2."""
    num = r.num * _poly_flip(r.den)
    den = r.den * _poly_flip(r.den)
    if not num.is_even() or not den.is_even():
        raise NotCompatible("coefficient is not a function of z^2")
    return RatFunc(_poly_halve(num), _poly_halve(den))


def power_substitute(ode: ParamODE, k: int) -> ParamODE:
    """Equation for F with f(z) = F(z^k); supported for k in {1, 2}."""
    if k == 1:
        return ParamODE(ode.p, ode.q, ode.gauge_log, name=ode.name)
    if k != 2:
        raise NotCompatible(f"power substitution implemented for k in {{1,2}}, got {k}")
    z2 = Z * Z
    cand_p = (2 * ONE + 2 * Z * ode.p) / (4 * z2)
    cand_q = ode.q / (4 * z2)
    return ParamODE(_as_even(cand_p), _as_even(cand_q), name=ode.name + "+sq")


# ---------------------------------------------------------------------------
# Moebius change of variable with accompanying gauge.
# ---------------------------------------------------------------------------

@dataclass
class MobiusMap:
    a: QQi
    b: QQi
    c: QQi
    d: QQi

    def __post_init__(self):
        if (self.a * self.d - self.b * self.c).is_zero():
            raise ValueError("degenerate Moebius map")

    def apply(self, z: QQi):
        den = self.c * z + self.d
        if den.is_zero():
            return INFINITY
        return (self.a * z + self.b) / den

    def apply_infinity(self):
        if self.c.is_zero():
            return INFINITY
        return self.a / self.c


def mobius(ode: ParamODE, m: MobiusMap, g: GaugeFactor | None = None) -> ParamODE:
    """Equation for G with f(x) = w(x) G(m(x)), in the variable zeta = m(x)."""
    if g is None:
        g = GaugeFactor([])
    L = g.log_derivative()
    det = lam_const(m.a * m.d - m.b * m.c)
    cxd = RatFunc.from_poly(z_poly(lam_const(m.d), lam_const(m.c)))
    mp = RatFunc.const(det, L_FIELD) / (cxd * cxd)          # m'(x)
    mpp_over_mp = RatFunc.const(lam_const(-2 * m.c), L_FIELD) / cxd
    p_x = (2 * L + ode.p) / mp + mpp_over_mp / mp
    q_x = ((L.derivative() + L * L) + ode.p * L + ode.q) / (mp * mp)
    # substitute x = m^{-1}(zeta) = (d zeta - b)/(-c zeta + a)
    p_new = p_x.compose_mobius(lam_const(m.d), lam_const(-m.b),
                               lam_const(-m.c), lam_const(m.a))
    q_new = q_x.compose_mobius(lam_const(m.d), lam_const(-m.b),
                               lam_const(-m.c), lam_const(m.a))
    return ParamODE(p_new, q_new, name=ode.name + "+mobius")


# ---------------------------------------------------------------------------
# SUSY factorization step.
# ---------------------------------------------------------------------------

@dataclass
class SusyData:
    """Data of the factorization M(z) (d+W)(d-W) g = E g.

    W is the logarithmic derivative of the ground state, M the inverse
    spectral weight, and E the shifted eigenvalue parameter; the input
    Schroedinger-form equation must satisfy q = -(W' + W^2) - E/M exactly.
    """

    W: RatFunc               # BiRat
    weight_inv: RatFunc      # BiRat, the factor M(z)
    eigen_shift: RatFunc     # RatL, the parameter E(lambda)

    def factorization_residual(self, schrod: ParamODE) -> RatFunc:
        """q + (W' + W^2) + E/M; zero iff the factorization matches."""
        E = RatFunc.const(self.eigen_shift, L_FIELD)
        return schrod.q + (self.W.derivative() + self.W * self.W) + E / self.weight_inv


def susy_partner(schrod: ParamODE, susy: SusyData) -> ParamODE:
    """Partner equation for g~ = (d - W) g.

    Applying (d - W) to M (d + W) g~ = E g~ and normalizing yields
    g~'' + (M'/M) g~' + [(M'/M) W + W' - W^2 - E/M] g~ = 0.
    """
    if not schrod.p.is_zero():
        raise NotSchrodingerForm("first-order term present")
    resid = susy.factorization_residual(schrod)
    if not resid.is_zero():
        raise MismatchError("susy-factorization", "q != -(W'+W^2) - E/M")
    M = susy.weight_inv
    W = susy.W
    E = RatFunc.const(susy.eigen_shift, L_FIELD)
    mlog = M.derivative() / M
    p_new = mlog
    q_new = mlog * W + W.derivative() - W * W - E / M
    return ParamODE(p_new, q_new, name=schrod.name + "+susy")


# ---------------------------------------------------------------------------
# The verified chain.
# ---------------------------------------------------------------------------

HALF_L = Fraction(1, 2)


def chain_script():
    """The transformation chain as data: (stage name, callable, target name).

    Each callable maps the previous equation to the next; targets are the
    registered closed forms.
    """
    lam_half = lam_ratfunc([0, HALF_L])     # lambda/2
    minus_lam_half = lam_ratfunc([0, -HALF_L])
    lam_half_m1 = lam_ratfunc([-1, HALF_L])  # lambda/2 - 1

    def stage_normalize(_prev):
        return normalize(*eq_spec_raw(), name="spec")

    def stage_gauge(prev):
        g = GaugeFactor([(0, -1), (1, minus_lam_half), (-1, minus_lam_half)])
        return gauge(prev, g)

    def stage_regroup(prev):
        return ParamODE(prev.p, prev.q, prev.gauge_log, name="Schrod")

    def stage_susy(prev):
        w2 = (ONE - Z * Z) * (ONE - Z * Z)
        susy = SusyData(W=ground_state_log_derivative(),
                        weight_inv=w2,
                        eigen_shift=lam_ratfunc([1, -2, 1]))   # (lambda-1)^2
        partner = susy_partner(prev, susy)
        g = GaugeFactor([(0, 1), (1, lam_half_m1), (-1, lam_half_m1)])
        return gauge(partner, g)

    def stage_heun0(prev):
        g = GaugeFactor([(0, 2)])
        return power_substitute(gauge(prev, g), 2)

    def stage_mobius(prev):
        m = MobiusMap(QQi(2), QQi(0), QQi(1), QQi(1))
        g = GaugeFactor([(-1, lam_ratfunc([-1, -HALF_L]))])   # (x+1)^{-(1+lam/2)}
        return mobius(prev, m, g)

    return [
        ("normalize", stage_normalize, "specre"),
        ("gauge-to-schrodinger", stage_gauge, "specg"),
        ("regroup", stage_regroup, "Schrod"),
        ("susy-partner", stage_susy, "specss"),
        ("heun-normalization", stage_heun0, "specssHeun0"),
        ("mobius-separation", stage_mobius, "specssHeun"),
    ]


def tan_half_angle_identity() -> bool:
    """2 cos(4 arctan z) = 2 (1 - 6 z^2 + z^4) / (1 + z^2)^2, verified via
    cos(2t) = (1-z^2)/(1+z^2) on the tan-half-angle substitution."""
    c2 = (ONE - Z * Z) / (ONE + Z * Z)
    lhs = 2 * (2 * c2 * c2 - ONE)
    rhs = 2 * (ONE - 6 * Z * Z + Z * Z * Z * Z) / ((ONE + Z * Z) * (ONE + Z * Z))
    return lhs == rhs


def verify_chain():
    """Run the whole chain and compare each stage with its registered target.

    Returns a report dict; raises MismatchError naming the first differing
    stage and coefficient.
    """
    registry = build_registry()
    if not tan_half_angle_identity():
        raise MismatchError("trig-identity", "tan-half-angle check failed")
    report = {"stages": [], "trig_identity": True}
    current = None
    for name, fn, target_name in chain_script():
        current = fn(current)
        target = registry[target_name]
        if current.p != target.p:
            raise MismatchError(name, "first-derivative coefficient differs")
        if current.q != target.q:
            raise MismatchError(name, "zeroth-order coefficient differs")
        sing = [str(d.location) for d in fuchs_check(target)]
        report["stages"].append({
            "stage": name,
            "target": target_name,
            "p_matches": True,
            "q_matches": True,
            "singular_points": sing,
        })
        current = ParamODE(target.p, target.q, name=target_name)
    report["verified"] = True
    return report
