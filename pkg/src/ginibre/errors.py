"""Exception hierarchy.

Usage errors subclass ``ValueError`` so callers that only care about bad
input can catch that; numerical failures derive from ``NumericalError``.
"""


class GinibreError(Exception):
    """Base class for all package errors."""


class UsageError(GinibreError, ValueError):
    """Invalid input: bad syntax, wrong sizes, violated preconditions."""


class ParityError(UsageError):
    """A Pfaffian was requested of an odd-dimensional matrix."""


class SizeError(UsageError):
    """Dimension mismatch or a size above a routine's cap."""


class EmptyDomainError(UsageError):
    """No increasing map exists for the requested sizes."""


class PreconditionError(UsageError):
    """A method precondition (e.g. even psi for the parity route) fails."""


class NumericalError(GinibreError, ArithmeticError):
    """Base class for numerical failures."""


class QuadratureError(NumericalError):
    """Non-finite integrand samples."""


class SingularNormalizationError(NumericalError):
    """Skew-orthogonalization hit a vanishing normalization."""


class SingularPivotError(NumericalError):
    """Hermitian Gram-Schmidt hit a vanishing norm."""


class ClassificationError(NumericalError):
    """A spectrum could not be split into real values and conjugate pairs."""
