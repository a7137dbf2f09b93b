"""Error kinds raised by the building library.

Each class subclasses the builtin that matches its meaning and carries a
default message, so callers can raise them bare.
"""


class DomainError(ValueError):
    """An input lies outside the domain of the operation."""

    def __init__(self, message: str = "input is outside the domain of this operation"):
        super().__init__(message)


class DimensionError(DomainError):
    """Two values come from value groups or matrix spaces of different size."""

    def __init__(self, message: str = "dimension mismatch"):
        super().__init__(message)


class SplitIndexError(DomainError):
    """A coarse split index s is outside 1 <= s < d."""

    def __init__(self, message: str = "split index must satisfy 1 <= s < d"):
        super().__init__(message)


class FieldDivisionError(ZeroDivisionError):
    """Division by the zero element of the field."""

    def __init__(self, message: str = "division by zero in the function field"):
        super().__init__(message)


class NotInValuationRingError(DomainError):
    """An element with negative value was passed where an integral one is required."""

    def __init__(self, message: str = "element is not in the valuation ring"):
        super().__init__(message)


class DegreeBoundExceeded(OverflowError):
    """A normalized field element has grown beyond the configured degree bound."""

    def __init__(self, message: str = "field element exceeds the configured degree bound"):
        super().__init__(message)


class ElementParseError(ValueError):
    """Text could not be read as an element of the function field."""

    def __init__(self, message: str = "could not parse field element"):
        super().__init__(message)


class RankError(DomainError):
    """A basis or matrix is singular."""

    def __init__(self, message: str = "matrix is singular"):
        super().__init__(message)


class ShapeError(DomainError):
    """A matrix has the wrong shape for the operation."""

    def __init__(self, message: str = "matrix has the wrong shape"):
        super().__init__(message)


class GroupMembershipError(DomainError):
    """A matrix is not in the group the operation acts with (usually det != 1)."""

    def __init__(self, message: str = "matrix is not in SL_n"):
        super().__init__(message)


class NotInNormalizerError(DomainError):
    """A matrix is not monomial, so it is not in the torus normalizer N."""

    def __init__(self, message: str = "matrix is not monomial"):
        super().__init__(message)


class FiberError(DomainError):
    """A lattice class does not lie in the fiber of the given coarse vertex."""

    def __init__(self, message: str = "lattice class is not in the fiber of the coarse vertex"):
        super().__init__(message)


class UnsupportedShapeError(NotImplementedError):
    """The construction is only implemented for a fixed n and d."""

    def __init__(self, message: str = "only SL_2 over a rank-2 field is supported"):
        super().__init__(message)
