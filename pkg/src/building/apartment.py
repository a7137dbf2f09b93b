"""The standard apartment: Λ^n modulo the diagonal, roots, half-apartments and enclosures.

Roots are indexed by ordered pairs (i, j), 1-based, i != j, and evaluate as
α_{i,j}(x) = x_j - x_i. With that convention the root element x_{α_{i,j}}(c)
fixes exactly the half-apartment {α_{i,j} >= -ω(c)}.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from ..algebra.ordered_values import LexVal, abs_val, lex_sum
from ..algebra.valued_field import FieldElem, val
from ..errors import DimensionError, DomainError

Root = Tuple[int, int]


@dataclass(frozen=True)
class ApartmentPoint:
    """n values modulo the diagonal, stored with the first coordinate shifted to zero."""

    coords: Tuple[LexVal, ...]

    def __post_init__(self):
        coords = tuple(self.coords)
        if not coords:
            raise DomainError("an apartment point needs at least one coordinate")
        dim = coords[0].dim
        if any(c.dim != dim for c in coords):
            raise DimensionError("apartment coordinates have different ranks")
        if any(c.is_inf for c in coords):
            raise DomainError("apartment coordinates must be finite")
        base = coords[0]
        object.__setattr__(self, "coords", tuple(c - base for c in coords))

    @classmethod
    def origin(cls, n: int, dim: int) -> "ApartmentPoint":
        return cls(tuple(LexVal.zero(dim) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def dim(self) -> int:
        return self.coords[0].dim

    def __getitem__(self, i: int) -> LexVal:
        """1-based coordinate access."""
        return self.coords[i - 1]

    def shift(self, vector: Sequence[LexVal]) -> "ApartmentPoint":
        if len(vector) != self.n:
            raise DimensionError("translation vector has the wrong length")
        return ApartmentPoint(tuple(a + b for a, b in zip(self.coords, vector)))

    def difference(self, other: "ApartmentPoint") -> Tuple[LexVal, ...]:
        """Coordinates of self - other (a representative modulo the diagonal)."""
        _check_compatible(self, other)
        return tuple(a - b for a, b in zip(self.coords, other.coords))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def _check_compatible(x: ApartmentPoint, y: ApartmentPoint):
    if x.n != y.n or x.dim != y.dim:
        raise DimensionError("apartment points come from different apartments")


def roots(n: int) -> List[Root]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


def _check_root(n: int, i: int, j: int):
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise DomainError(f"({i},{j}) is not a root of SL_{n}")


def root_value(x: ApartmentPoint, i: int, j: int) -> LexVal:
    _check_root(x.n, i, j)
    return x[j] - x[i]


def apartment_distance(x: ApartmentPoint, y: ApartmentPoint) -> LexVal:
    """Sum over i < j of |α_{i,j}(y - x)|."""
    _check_compatible(x, y)
    gap = ApartmentPoint(y.difference(x))
    n = x.n
    return lex_sum((abs_val(root_value(gap, i, j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)), x.dim)


@dataclass(frozen=True)
class HalfApartmentBound:
    """An intersection of half-apartments {α >= -λ_α}, one bound per root (infinite means absent)."""

    n: int
    bounds: Tuple[Tuple[Root, LexVal], ...]

    @classmethod
    def from_dict(cls, n: int, bounds: Dict[Root, LexVal]) -> "HalfApartmentBound":
        for i, j in bounds:
            _check_root(n, i, j)
        return cls(n, tuple(sorted(bounds.items())))

    def as_dict(self) -> Dict[Root, LexVal]:
        return dict(self.bounds)

    def get(self, i: int, j: int) -> LexVal:
        return self.as_dict()[(i, j)]

    def contains(self, x: ApartmentPoint) -> bool:
        return bound_contains(self, x)

    def on_wall(self, x: ApartmentPoint, i: int, j: int) -> bool:
        return bound_on_wall(self, x, i, j)


def bound_contains(bound: HalfApartmentBound, x: ApartmentPoint) -> bool:
    if x.n != bound.n:
        raise DimensionError("point and bound live in different apartments")
    for (i, j), lam in bound.bounds:
        if lam.is_inf:
            continue
        if root_value(x, i, j) < -lam:
            return False
    return True


def bound_on_wall(bound: HalfApartmentBound, x: ApartmentPoint, i: int, j: int) -> bool:
    """True when x lies on the wall {α_{i,j} = -λ} of the given bound."""
    lam = bound.get(i, j)
    return not lam.is_inf and root_value(x, i, j) == -lam


def enclosure(points: Iterable[ApartmentPoint]) -> HalfApartmentBound:
    """The tightest bound λ_α = max_x (-α(x)) containing every point."""
    points = list(points)
    if not points:
        raise DomainError("enclosure of an empty set")
    first = points[0]
    for x in points[1:]:
        _check_compatible(first, x)
    return HalfApartmentBound.from_dict(first.n, {(i, j): max(-root_value(x, i, j) for x in points) for i, j in roots(first.n)})


def fixed_half_apartment(n: int, i: int, j: int, c: FieldElem) -> HalfApartmentBound:
    """The half-apartment fixed pointwise by the root element x_{α_{i,j}}(c)."""
    _check_root(n, i, j)
    dim = c.ctx.d
    bounds = {root: LexVal.inf(dim) for root in roots(n)}
    bounds[(i, j)] = val(c)
    return HalfApartmentBound.from_dict(n, bounds)
