"""Exception hierarchy shared across the package."""


class ConjcertError(Exception):
    """Base class for all package errors."""


class UsageError(ConjcertError):
    """Caller violated a documented precondition or passed malformed input."""


class DimensionMismatch(UsageError):
    """Shapes of matrices/vectors are incompatible for the requested operation."""


class SingularMatrixError(ConjcertError):
    """Inversion requested for a matrix with zero determinant."""


class FixedPointError(UsageError):
    """The acting matrix has a nonzero fixed point, so the unique-conjugator
    construction does not apply.  Carries the offending kernel basis and,
    for multi-level lifts, the level index."""

    def __init__(self, message, kernel=None, level=None):
        super().__init__(message)
        self.kernel = kernel
        self.level = level


class CertificateError(ConjcertError):
    """A would-be certificate failed exact re-multiplication."""


class PresentationError(ConjcertError):
    """A central-series presentation is internally inconsistent
    (e.g. a residual fails to descend to the next level)."""


class ClosureCapExceeded(ConjcertError):
    """Group closure grew past the configured cap."""


class TheoremViolation(ConjcertError):
    """A verified witness contradicts a proved structural consequence.
    Raised by the conformance checkers; indicates a bug, never expected."""
