"""Exception hierarchy.

Every error raised by the library derives from :class:`OddPartError`, so the
CLI can report ``type(err).__name__`` and exit with status 1.
"""


class OddPartError(Exception):
    """Base class for all library errors."""


# partition_core
class NonPositiveLength(OddPartError):
    pass


class SumMismatch(OddPartError):
    pass


class WrongCardinality(OddPartError):
    pass


class InvalidExponent(OddPartError):
    pass


class UbViolation(OddPartError):
    pass


class StalledStream(OddPartError):
    pass


class IncompleteFamily(OddPartError):
    """A finite custom family was loaded with tail extension disabled."""


class RowLimitExceeded(OddPartError):
    """A row beyond the family's configured maximum order was requested."""


# families / np_spectrum
class TraceIdentityViolation(OddPartError):
    pass


class NonPositiveEigenvalue(OddPartError):
    pass


class GateFailure(OddPartError):
    pass


class BracketNotFound(OddPartError):
    pass


class NonMonotoneMap(OddPartError):
    pass


class BudgetExceeded(OddPartError):
    pass


class EigenSolveFailure(OddPartError):
    pass


class QuadratureNonConvergence(OddPartError):
    pass


# specfun
class ArgumentOutOfDomain(OddPartError, ValueError):
    pass


class PrecisionLoss(OddPartError):
    pass
