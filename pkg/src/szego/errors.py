"""Exception hierarchy shared by all modules."""


class SzegoError(Exception):
    """Base class for library errors."""


class InvalidInput(SzegoError, ValueError):
    pass


class NotSymmetric(InvalidInput):
    pass


class ImaginaryPartNotPositiveDefinite(InvalidInput):
    pass


class NonFinite(InvalidInput):
    pass


class EvaluationError(SzegoError):
    """Raised when a well-formed request cannot be evaluated."""


class TruncationBudgetExceeded(EvaluationError):
    pass


class PoleAtLatticePoint(EvaluationError):
    pass


class DegenerateFiber(EvaluationError):
    pass


class OnThetaDivisor(EvaluationError):
    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class DiagonalPole(EvaluationError):
    pass


class AliasingDetected(EvaluationError):
    pass


class ZeroNotSimple(EvaluationError):
    pass


class SampleTooCloseToSingularity(EvaluationError):
    pass
