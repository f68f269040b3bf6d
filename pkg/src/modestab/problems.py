"""Registry of certification problems.

A problem bundles everything the pipeline needs: the equation chain, the
coefficient recurrence, the quasi-solution, the bound set for the closing
induction, the per-index cutoff, and eigenvalue-scan defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .equations import get_equation
from .recurrence import RecurrenceSystem, displayed_recurrence


@dataclass
class Problem:
    name: str
    heun_equation_name: str
    spectral_equation_name: str
    recurrence: RecurrenceSystem
    m_delta: Fraction
    m_eps: Fraction
    m_c: Fraction
    n_cutoff: int
    scan_rect: tuple            # (re_lo, re_hi, im_lo, im_hi)
    scan_resolution: int
    expected_eigenvalues: tuple

    def heun_equation(self):
        return get_equation(self.heun_equation_name)

    def spectral_equation(self):
        return get_equation(self.spectral_equation_name)


_REGISTRY: dict[str, Problem] = {}


def get_problem(name: str) -> Problem:
    if not _REGISTRY:
        _REGISTRY["wavemaps-corotational"] = Problem(
            name="wavemaps-corotational",
            heun_equation_name="specssHeun",
            spectral_equation_name="spec",
            recurrence=displayed_recurrence(),
            m_delta=Fraction(1, 3),
            m_eps=Fraction(1, 12),
            m_c=Fraction(1, 2),
            n_cutoff=32,
            scan_rect=(-0.125, 2.5, -10.0, 10.0),
            scan_resolution=120,
            expected_eigenvalues=(1.0,),
        )
    return _REGISTRY[name]


def problem_names():
    get_problem("wavemaps-corotational")
    return sorted(_REGISTRY)
