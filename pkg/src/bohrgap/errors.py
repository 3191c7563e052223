"""Shared exception types.

Three families, mapped to CLI exit codes: validation errors (bad inputs,
violated hypotheses -> exit 2), resource errors (enumeration budget or
precision exhaustion -> exit 3), and construction failures (a build step
that can legitimately fail at finite N -> exit 0 with the failure reported
as data).
"""


class ValidationError(ValueError):
    """Input outside an operation's stated hypotheses."""


class BudgetExceeded(RuntimeError):
    """An enumeration or search would exceed the configured budget."""


class PrecisionExhausted(ArithmeticError):
    """A comparison stayed indecisive after scale escalation.

    Carries enough context to reproduce the offending comparison.
    """

    def __init__(self, msg, *, n=None, coord=None):
        super().__init__(msg)
        self.n = n
        self.coord = coord


class ConstructionError(RuntimeError):
    """Base for documented finite-N construction failures."""


class NoBasePoint(ConstructionError):
    """No b0 <= N/20 with ||b0*alpha_i - gamma_i|| <= delta_i/20."""


class SmallDirichletWitness(ConstructionError):
    """The minimal Dirichlet witness s falls below N^sqrt(eps)."""


class BasePointDrift(ConstructionError):
    """b = b0 + s exists but ||b*alpha_i - gamma_i|| <= delta_i/10 fails."""


class LengthUnderflow(ConstructionError):
    """Some progression length N_i < N^eps."""


class MinimaDegenerate(ConstructionError):
    """A reduced basis vector has first coordinate zero."""


class AmbiguousLift(ValidationError):
    """Witness lift requested with some delta_i >= 1/2."""
