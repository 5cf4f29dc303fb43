"""Exception types shared across the package."""


class BetaDoublingError(Exception):
    """Base class for all package-specific errors."""


class InvalidDegreeError(BetaDoublingError, ValueError):
    """The m-bonacci degree must be an integer >= 2."""


class InvalidLetterError(BetaDoublingError, ValueError):
    """A gap letter index fell outside 0..m."""


class InvalidProbabilityError(BetaDoublingError, ValueError):
    """Probability weights must be rational, positive and sum to 1."""


class LevelTooSmallError(BetaDoublingError, ValueError):
    """The requested scan needs more partition points than the level has."""


class ResourceCapError(BetaDoublingError, RuntimeError):
    """Predicted work exceeds a configured cap (levels grow like beta**n)."""


class SignUndecidedError(BetaDoublingError, ArithmeticError):
    """Interval refinement hit its precision budget without excluding zero.

    For a reduced nonzero coefficient vector this cannot happen when
    1, beta, ..., beta**(m-1) are linearly independent over Q; raising
    instead of deciding keeps sign determination honest.
    """


class AuditFailure(BetaDoublingError, RuntimeError):
    """Exact-comparison audit disagreed with a label-driven merge decision."""


class NoEdgeError(BetaDoublingError, LookupError):
    """The requested pair of triple states is not an offspring edge."""


class IntervalSpecError(BetaDoublingError, ValueError):
    """Malformed interval endpoint specification on the command line."""
