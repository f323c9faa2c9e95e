"""Exception hierarchy shared by every geometry module."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class NonPositiveWeight(GeometryError):
    pass


class NotNormalized(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class NotCentered(GeometryError):
    """Tangent components violate E_p(u) = 0."""


class BaseMismatch(GeometryError):
    pass


class FootMismatch(GeometryError):
    pass


class SingularBasis(GeometryError):
    pass


class CurveDomain(GeometryError):
    pass


class LeftSimplex(GeometryError):
    """A trajectory left the open simplex.

    ``t_exit`` is the last time at which the trajectory was still valid
    (or the time of the offending step).
    """

    def __init__(self, message, t_exit=None):
        super().__init__(message)
        self.t_exit = t_exit


class OutsideChart(GeometryError):
    pass


class NotOrthogonal(GeometryError):
    pass


class NotUnitVector(GeometryError):
    pass
