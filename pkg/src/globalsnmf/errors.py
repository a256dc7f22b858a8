"""Exception hierarchy shared by every module of the package."""


class FactorizationError(Exception):
    """Base class for all errors raised by globalsnmf."""


class NotSymmetric(FactorizationError, ValueError):
    pass


class ConvergenceFailure(FactorizationError):
    pass


class DimensionMismatch(FactorizationError, ValueError):
    pass


class RankDeficient(FactorizationError):
    """A matrix expected to have full column rank does not."""

    def __init__(self, message, ratio=None):
        super().__init__(message)
        self.ratio = ratio


class SingularBlock(FactorizationError):
    def __init__(self, message, achieved_rank=None):
        super().__init__(message)
        self.achieved_rank = achieved_rank


class NonPositiveRay(FactorizationError):
    """Some points cannot be seen from the cone apex through the hyperplane."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class RankCollapse(FactorizationError):
    pass


class NegativeInput(FactorizationError, ValueError):
    pass


class InvalidRank(FactorizationError, ValueError):
    pass


class ParseError(FactorizationError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
