"""Exception hierarchy.

Every domain failure derives from :class:`MarkovFIError` so callers (and the
command-line front end) can separate modelling mistakes from programming
errors. Optimizer failures have their own branch because they map to a
different process exit status.
"""


class MarkovFIError(Exception):
    """Base class for all domain and validation errors."""


class ValidationError(MarkovFIError):
    """Input violates a structural invariant."""


class NegativeOffDiagonal(ValidationError):
    pass


class RowSumNonzero(ValidationError):
    pass


class NotIrreducible(ValidationError):
    pass


class InvalidMeasure(ValidationError):
    pass


class InvalidDensity(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonPositiveValue(ValidationError):
    pass


class LambdaOutOfRange(ValidationError):
    pass


class DeltaTooLarge(ValidationError):
    pass


class DensityUnderflow(MarkovFIError):
    """A ratio of density values fell below the representable guard."""


class NumericalRankFailure(MarkovFIError):
    pass


class EigensolveFailure(MarkovFIError):
    pass


class SizeOverflow(MarkovFIError):
    pass


class StepSizeUnderflow(MarkovFIError):
    pass


class EmptyLevelSet(ValidationError):
    pass


class ZeroClusterMass(ValidationError):
    pass


class RestrictionNotIrreducible(ValidationError):
    pass


class InvalidMap(ValidationError):
    pass


class SearchSpaceTooLarge(MarkovFIError):
    pass


class OptimizerDidNotConverge(Exception):
    """Restart budget exhausted without any converged restart."""
