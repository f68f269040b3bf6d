"""Certified mode-stability analysis for self-similar wave-maps blowup.

The package mechanizes the linear-stability analysis of the self-similar
blowup of corotational wave maps: the exact transformation of the spectral
ODE to Heun form, the coefficient recurrence and its quasi-solution bounds
(rigorously verified with interval arithmetic), and independent numerical
cross-checks (Wronskian eigenvalue scan, wave-propagator inequalities in
five dimensions).
"""

from .gaussrat import Rat, QQi, qqi_parse
from .polys import Poly, RatFunc, lam_poly, lam_ratfunc, quadratic_roots
from .intervals import Iv, ComplexBox, enclose_ratfunc

__version__ = "0.1.0"

__all__ = [
    "Rat", "QQi", "qqi_parse",
    "Poly", "RatFunc", "lam_poly", "lam_ratfunc", "quadratic_roots",
    "Iv", "ComplexBox", "enclose_ratfunc",
    "__version__",
]
