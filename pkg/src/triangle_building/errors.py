"""Exception types shared across the package."""


class TriangleBuildingError(Exception):
    pass


class UnsupportedOrder(TriangleBuildingError):
    pass


class InvalidDifferenceSet(TriangleBuildingError):
    pass


class IndexOutOfRange(TriangleBuildingError):
    pass


class EqualLines(TriangleBuildingError):
    pass


class EqualPoints(TriangleBuildingError):
    pass


class SearchBudgetExceeded(TriangleBuildingError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []


class BudgetExceeded(TriangleBuildingError):
    pass


class ChamberOutsideBall(TriangleBuildingError):
    pass


class InadmissibleWall(TriangleBuildingError):
    pass


class FillContradiction(TriangleBuildingError):
    pass


class DepthInsufficient(TriangleBuildingError):
    pass


class BacktrackExhausted(TriangleBuildingError):
    pass


class NotATransition(TriangleBuildingError):
    pass


class PreconditionFailed(TriangleBuildingError):
    pass
