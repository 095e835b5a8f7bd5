"""Exception hierarchy."""


class LevicartanError(Exception):
    """Base class for every error raised by this package."""


class ConvergenceFailure(LevicartanError, ArithmeticError):
    pass


class IndexOutOfRange(LevicartanError, IndexError):
    pass


class NotSkewHermitian(LevicartanError, ValueError):
    pass


class ExactModeOnInexactInput(LevicartanError, TypeError):
    pass


class ShapeMismatch(LevicartanError, ValueError):
    pass


class PartitionMismatch(LevicartanError, ValueError):
    pass


class InvalidSpec(LevicartanError, ValueError):
    pass


class NotApplicable(LevicartanError, ValueError):
    pass


class NotSurjectiveSpec(LevicartanError, ValueError):
    """Raised when a decomposition is requested for a triple outside the classification."""


class DiagonalBlockRequested(LevicartanError, ValueError):
    pass


class InvalidLoop(LevicartanError, ValueError):
    pass


class SpecActuallySurjective(LevicartanError, ValueError):
    pass


class PreconditionViolated(LevicartanError, ValueError):
    pass


class SearchExhausted(LevicartanError, RuntimeError):
    """No step size in the search produced a visibly non-real coefficient."""


class DispatchGap(LevicartanError, RuntimeError):
    """A non-surjective triple is not covered by any witness construction."""
