"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its exit-code contract without a lookup table.
"""


class FracshiftError(Exception):
    exit_code = 1


class UsageError(FracshiftError, ValueError):
    exit_code = 2


class InvalidFamilyError(UsageError):
    """A weight family is unknown, or supplied a nonpositive coefficient."""


class InsufficientDataError(FracshiftError, ValueError):
    exit_code = 2


class IndexRangeError(FracshiftError, IndexError):
    """Coefficient index beyond the family's guaranteed-accuracy range."""

    exit_code = 3


class DomainError(FracshiftError, ValueError):
    exit_code = 3


class OutOfEnvelopeError(DomainError):
    """Argument beyond the validity envelope of a truncated series."""


class IncompatibleSpaceError(DomainError):
    """Inner product between elements of different Fock spaces."""


class SingularityError(DomainError):
    """Closed form evaluated at its singular time t = 0."""


class SingularNodeError(SingularityError):
    """A vanishing supershift node raised to a negative power."""


class HypothesisViolationError(DomainError):
    """Gaussian moment formula called with Re(a) <= 0."""


class CoefficientOverflowError(DomainError, OverflowError):
    """Supershift coefficients too large for double precision."""


class ToleranceError(FracshiftError, ArithmeticError):
    exit_code = 4

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DivergentMomentError(ToleranceError):
    """Moment integral whose tail does not vanish at the cutoff."""
