"""Exception hierarchy shared by every module of the package."""


class ToricError(ValueError):
    """Base class for all domain errors raised by toric_chow."""


class ZeroVector(ToricError):
    pass


class NotPrimitive(ToricError):
    pass


class RankMismatch(ToricError):
    pass


class NotInCone(ToricError):
    pass


class NotStronglyConvex(ToricError):
    pass


class RankTooHigh(ToricError):
    pass


class BoundInsufficient(ToricError):
    pass


class InvalidFan(ToricError):
    """Structural problem with a fan that has no more specific class."""


class OverlappingCones(InvalidFan):
    def __init__(self, first, second, message=None):
        self.cones = (first, second)
        super().__init__(message or f"cones {first} and {second} do not meet in a common face")


class NonPrimitiveRay(InvalidFan):
    pass


class DuplicateRay(InvalidFan):
    pass


class NotFullDimensional(ToricError):
    pass


class NotLatticePolytope(ToricError):
    pass


class NotAVertex(ToricError):
    pass


class ConeNotInFan(ToricError):
    pass


class NonIntegralDirection(ToricError):
    pass


class DisconnectedGraph(ToricError):
    pass


class InvalidCurve(ToricError):
    pass


class NotComplete(ToricError):
    pass


class MergeNotConvex(AssertionError):
    """Internal failure of the quotient-fan merge step; never expected."""


class NonSimplicialAnchor(ToricError):
    pass


class DirectionZero(ZeroVector):
    pass


class NotSmooth(ToricError):
    pass


class MobileTermPresent(ToricError):
    pass
