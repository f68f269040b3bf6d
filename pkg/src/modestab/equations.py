"""Registry of the named spectral equations, built from their closed forms.

Each entry is a normalized ParamODE  f'' + p f' + q f = 0.  The registry
serves as the target corpus for the transformation-chain verification:
every chain stage must reproduce the registered equation exactly.

Names:
  spec        -- the linearized spectral equation (raw display, normalized)
  specre      -- the same equation written directly in normalized form
  specg       -- after the gauge removing the first-order term
  Schrod      -- the Schroedinger-form regrouping of specg (same ODE)
  specss      -- after the SUSY step (ground-state eigenvalue removed)
  specssHeun0 -- Heun form in x = rho^2
  specssHeun  -- Heun form after the Moebius map separating the singularities
"""

from __future__ import annotations

from fractions import Fraction

from .fuchsian import ParamODE
from .gaussrat import QQi
from .polys import L_FIELD, RatFunc, lam_ratfunc, z_poly, z_ratfunc

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

Z = RatFunc.x(L_FIELD)
ONE = RatFunc.const(L_FIELD.one, L_FIELD)


def _lam() -> RatFunc:
    """The spectral parameter as a (z-constant) BiRat."""
    return RatFunc.const(lam_ratfunc([0, 1]), L_FIELD)


def potential_v() -> RatFunc:
    """V = 2(1 - 6 z^2 + z^4) / (z^2 (1-z^2) (1+z^2)^2)."""
    num = z_ratfunc([2, 0, -12, 0, 2])
    den = (Z * Z) * (ONE - Z * Z) * (ONE + Z * Z) * (ONE + Z * Z)
    return num / den


def eq_spec_raw():
    """Coefficients (A2, A1, A0) of the raw display
    A2 f'' + A1 f' + A0 f = 0 for the spectral equation."""
    lam = _lam()
    a2 = -(ONE - Z * Z)
    a1 = z_ratfunc([-2], [0, 1]) + 2 * (lam + 1) * Z
    a0 = z_ratfunc([2, 0, -12, 0, 2]) / ((Z * Z) * (ONE + Z * Z) * (ONE + Z * Z)) \
        + lam * (lam + 1)
    return a2, a1, a0


def normalize(a2: RatFunc, a1: RatFunc, a0: RatFunc, name="") -> ParamODE:
    """Divide a general second-order form by its leading coefficient."""
    return ParamODE(a1 / a2, a0 / a2, name=name)


def eq_specre() -> ParamODE:
    lam = _lam()
    # p = 2(1-(lam+1)z^2)/(z(1-z^2))
    p = (z_ratfunc([2]) - 2 * (lam + 1) * Z * Z) / (Z * (ONE - Z * Z))
    q = -(potential_v() + lam * (lam + 1) / (ONE - Z * Z))
    return ParamODE(p, q, name="specre")


def eq_specg() -> ParamODE:
    lam = _lam()
    w2 = (ONE - Z * Z) * (ONE - Z * Z)
    q = -(potential_v() + lam * (lam - 2) / w2)
    return ParamODE(RatFunc.zero(L_FIELD), q, name="specg")


def eq_schrod() -> ParamODE:
    lam = _lam()
    w2 = (ONE - Z * Z) * (ONE - Z * Z)
    q = (ONE / w2 - potential_v()) - (lam - 1) * (lam - 1) / w2
    return ParamODE(RatFunc.zero(L_FIELD), q, name="Schrod")


def eq_specss() -> ParamODE:
    lam = _lam()
    p = (z_ratfunc([2]) - 2 * (lam + 1) * Z * Z) / (Z * (ONE - Z * Z))
    pot = z_ratfunc([6, 0, -2]) / ((Z * Z) * (ONE + Z * Z))
    q = -(pot + lam * (lam + 1)) / (ONE - Z * Z)
    return ParamODE(p, q, name="specss")


def eq_specss_heun0() -> ParamODE:
    lam = _lam()
    p = z_ratfunc([Fraction(7, 2)], [0, 1]) + lam / (Z - 1)
    num = (lam + 3) * (lam + 2) * Z + (lam * lam + 5 * lam - 2) * ONE
    q = RatFunc.const(lam_ratfunc([QUARTER]), L_FIELD) * num / (Z * (Z - 1) * (Z + 1))
    return ParamODE(p, q, name="specssHeun0")


def eq_specss_heun() -> ParamODE:
    lam = _lam()
    p = z_ratfunc([Fraction(7, 2)], [0, 1]) + lam / (Z - 1) \
        + z_ratfunc([HALF], [-2, 1])
    num = (lam + 4) * (lam + 2) * Z - (lam * lam + 12 * lam + 12) * ONE
    q = RatFunc.const(lam_ratfunc([QUARTER]), L_FIELD) * num / (Z * (Z - 1) * (Z - 2))
    return ParamODE(p, q, name="specssHeun")


def ground_state_log_derivative() -> RatFunc:
    """W = (2 - 3 z^2 - z^4) / (z (1-z^2)(1+z^2)), the logarithmic derivative
    of the ground state (1-z^2)^(1/2) z^2/(1+z^2)."""
    num = z_ratfunc([2, 0, -3, 0, -1])
    den = Z * (ONE - Z * Z) * (ONE + Z * Z)
    return num / den


REGISTRY = {}


def build_registry():
    """Construct (once) the named-equation registry."""
    if REGISTRY:
        return REGISTRY
    a2, a1, a0 = eq_spec_raw()
    REGISTRY["spec"] = normalize(a2, a1, a0, name="spec")
    REGISTRY["specre"] = eq_specre()
    REGISTRY["specg"] = eq_specg()
    REGISTRY["Schrod"] = eq_schrod()
    REGISTRY["specss"] = eq_specss()
    REGISTRY["specssHeun0"] = eq_specss_heun0()
    REGISTRY["specssHeun"] = eq_specss_heun()
    return REGISTRY


def get_equation(name: str) -> ParamODE:
    return build_registry()[name]
