"""Exception types shared across the package."""


class QwpError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(QwpError):
    """Operands act on Hilbert spaces of different dimension."""


class SpaceMismatchError(QwpError):
    """Predicates are defined over different outcome spaces."""


class DecompositionError(QwpError):
    """A matrix factorization (eigen/SVD) failed to converge.

    Raised instead of returning False so a numerical breakdown is never
    mistaken for a negative verdict.
    """


class ValidationError(QwpError):
    """An input violates a semantic contract (invalid state, predicate, map)."""


class NotTracePreservingError(ValidationError):
    """A program required to be trace preserving is not."""
