"""Exception types shared across the package.

Every failure mode that a caller might want to branch on has its own
class; plain ValueError/TypeError are reserved for programming errors.
"""


class ExactAlgebraError(Exception):
    """Base class for all domain errors raised by this package."""


class DivisionByZero(ExactAlgebraError):
    """Division by, or inversion of, the zero element."""


class MixedFields(ExactAlgebraError):
    """Operands belong to different scalar fields."""


class InfiniteField(ExactAlgebraError):
    """An exhaustive operation was requested over the rationals."""


class InvalidField(ExactAlgebraError):
    """Malformed field description (non-prime modulus, bad text form)."""


class DimensionMismatch(ExactAlgebraError):
    """Matrix/map operands have incompatible dimensions."""


class IndexOutOfRange(ExactAlgebraError):
    """A basis index lies outside [0, n)."""


class NotNormalized(ExactAlgebraError):
    """Rank-one factor vectors u, v do not satisfy v . u = 1."""


class NotTraceless(ExactAlgebraError):
    """A trace-zero matrix was required but trace is nonzero."""


class DecompositionFailed(ExactAlgebraError):
    """No commutator decomposition was found within the retry budget."""


class SamplingFailed(ExactAlgebraError):
    """Randomized construction exhausted its retry budget."""


class SearchSpaceTooLarge(ExactAlgebraError):
    """An exhaustive scan would exceed the configured budget."""


class UnparameterizableSolution(ExactAlgebraError):
    """A solution of the linear constraint system falls outside the
    scale-plus-trace family; signals a broken structural assumption."""
