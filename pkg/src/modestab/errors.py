"""Exception types shared across the package."""


class ModestabError(Exception):
    """Base class for all package-specific errors."""


# --- exact algebra ---------------------------------------------------------

class PoleError(ModestabError):
    """Exact evaluation of a rational function at a pole."""


class PossiblePole(ModestabError):
    """Interval enclosure of a denominator contains zero."""


class DegreeError(ModestabError):
    """Polynomial does not have the degree required by the operation."""


# --- ODE analysis ----------------------------------------------------------

class NotFuchsian(ModestabError):
    """A coefficient pole order exceeds the Fuchsian bound."""

    def __init__(self, point, order, msg=""):
        self.point = point
        self.order = order
        super().__init__(msg or f"pole of order {order} at {point} exceeds Fuchsian bound")


class NotSingular(ModestabError):
    """The requested point is an ordinary point of the equation."""


class LogCase(ModestabError):
    """Resonant exponent pair; the logarithmic branch is not generated."""


class OutsideDisk(ModestabError):
    """Series evaluation requested outside the guaranteed convergence disk."""


class UnresolvedFactor(ModestabError):
    """A denominator factor could not be split into exact roots."""


# --- transformations -------------------------------------------------------

class NotCompatible(ModestabError):
    """Power substitution would produce non-rational coefficients."""


class NotSchrodingerForm(ModestabError):
    """SUSY factorization requires an equation without first-order term."""


class MismatchError(ModestabError):
    """An exact identity check failed; carries the first differing item."""

    def __init__(self, stage, detail=""):
        self.stage = stage
        super().__init__(f"mismatch at {stage}" + (f": {detail}" if detail else ""))


class NotHeunForm(ModestabError):
    """Equation does not clear to the cubic-polynomial Heun form."""


# --- recurrences -----------------------------------------------------------

class ZeroCoefficient(ModestabError):
    """A ratio sequence hit a vanishing coefficient."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"coefficient a_{index} = 0; ratio undefined")


class HypothesisViolation(ModestabError):
    """Limit-equation roots have equal modulus; the dichotomy does not apply."""


class OverflowInFloatMode(ModestabError):
    """Floating-point coefficient run overflowed."""


# --- certification ---------------------------------------------------------

class BoundViolated(ModestabError):
    """A certified bound fails; carries a witness."""

    def __init__(self, target, witness, value, msg=""):
        self.target = target
        self.witness = witness
        self.value = value
        super().__init__(msg or f"|{target}| bound violated at {witness}: {value}")


class Inconclusive(ModestabError):
    """Subdivision budget exhausted before the bound could be decided."""

    def __init__(self, target, margin, msg=""):
        self.target = target
        self.margin = margin
        super().__init__(msg or f"verification of {target} inconclusive (best margin {margin})")


class PoleInHalfPlane(ModestabError):
    """A denominator root lies in the closed right half-plane."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"pole in closed right half-plane near {witness}")


class InductionFails(ModestabError):
    """The closing induction inequality fails; carries the exact slack."""

    def __init__(self, slack):
        self.slack = slack
        super().__init__(f"induction fails with slack {slack}")


class CertificationFailed(ModestabError):
    """Top-level certification failure tagged with the failing stage."""

    def __init__(self, stage, cause=None):
        self.stage = stage
        self.cause = cause
        super().__init__(f"FAILED({stage})" + (f": {cause}" if cause else ""))


# --- shooting --------------------------------------------------------------

class IntegratorFailure(ModestabError):
    """The adaptive ODE integrator reported failure."""


class ContourZero(ModestabError):
    """The mismatch function (nearly) vanishes on the scan contour."""


class BudgetExceeded(ModestabError):
    """Scan refinement exceeded its evaluation budget."""


class NotAnEigenvalue(ModestabError):
    """Eigenfunction extraction requested away from a mismatch zero."""


# --- radial profiles -------------------------------------------------------

class TruncationError(ModestabError):
    """Profile mass beyond the grid exceeds the truncation tolerance."""
