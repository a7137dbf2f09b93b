"""Exploration of the affine Weyl group of SL_2 over Z^2 acting on the root coordinate.

On the apartment of SL_2 the root α = α_{1,2} identifies points with
λ = α(x) in R^2. The generators w0, w1, w2 act on λ by affine maps
λ -> ±λ + c, which we read off their ν-action rather than hard-code. From
them we compute one canonical representative per orbit of a half-integer
grid, and test two candidate fundamental domains against it.
"""

from fractions import Fraction
from itertools import product
from math import gcd
from typing import Callable, Dict, List, NamedTuple, Tuple

from ..algebra.valued_field import FieldContext
from ..errors import UnsupportedShapeError
from .apartment import ApartmentPoint, root_value
from .groups import double_affine_generators, nu_action

Point = Tuple[Fraction, Fraction]


class RootCoordinateMap(NamedTuple):
    """λ -> sign * λ + shift."""

    sign: int
    shift: Point

    def apply(self, lam: Point) -> Point:
        return (self.sign * lam[0] + self.shift[0], self.sign * lam[1] + self.shift[1])


def root_coordinate_maps(ctx: FieldContext) -> Dict[str, RootCoordinateMap]:
    if ctx.d != 2:
        raise UnsupportedShapeError("fundamental domain exploration needs a rank-2 field")
    maps = {}
    origin = ApartmentPoint.origin(2, 2)
    for name, m in double_affine_generators(ctx).items():
        w = nu_action(m)
        shift = root_value(w.apply(origin), 1, 2).coords
        maps[name] = RootCoordinateMap(1 if w.is_translation else -1, (Fraction(shift[0]), Fraction(shift[1])))
    return maps


def translation_periods(maps: Dict[str, RootCoordinateMap]) -> Tuple[int, int]:
    """Per-coordinate periods of the translations obtained as products of two reflections."""
    shifts = [
        (a.shift[0] - b.shift[0], a.shift[1] - b.shift[1]) for a in maps.values() for b in maps.values() if a.sign == b.sign == -1
    ]
    periods = []
    for k in range(2):
        g = 0
        for s in shifts:
            g = gcd(g, int(s[k]))
        periods.append(g)
    return periods[0], periods[1]


def _reduce(lam: Point, periods: Tuple[int, int]) -> Point:
    return (lam[0] % periods[0], lam[1] % periods[1])


def canonical_representative(lam: Point, periods: Tuple[int, int]) -> Point:
    """Lexicographically least orbit point in [0, p1) x [0, p2)."""
    return min(_reduce(lam, periods), _reduce((-lam[0], -lam[1]), periods))


def orbit_points_in(lam: Point, periods: Tuple[int, int], low: Fraction, high: Fraction) -> List[Point]:
    """Every orbit point with both coordinates in [low, high]."""
    points = set()
    for sign in (1, -1):
        base = (sign * lam[0], sign * lam[1])
        span = int(high - low) // min(periods) + 2
        for k0, k1 in product(range(-span - 2, span + 3), repeat=2):
            p = (base[0] + k0 * periods[0], base[1] + k1 * periods[1])
            if low <= p[0] <= high and low <= p[1] <= high:
                points.add(p)
    return sorted(points)


def in_union_description(lam: Point) -> bool:
    """[0,1]^2 union (1,2) x (0,1]."""
    x, y = lam
    return (0 <= x <= 1 and 0 <= y <= 1) or (1 < x < 2 and 0 < y <= 1)


def in_difference_description(lam: Point) -> bool:
    """([0,2) x [0,1]) minus ([1,2] x {0})."""
    x, y = lam
    return (0 <= x < 2 and 0 <= y <= 1) and not (1 <= x <= 2 and y == 0)


class DescriptionFailure(NamedTuple):
    representative: Point
    members: Tuple[Point, ...]


class FundamentalDomainReport(NamedTuple):
    periods: Tuple[int, int]
    grid_size: int
    representatives: Tuple[Point, ...]
    union_failures: Tuple[DescriptionFailure, ...]
    difference_failures: Tuple[DescriptionFailure, ...]
    disagreements: Tuple[Point, ...]


def _failures(reps, periods, member: Callable[[Point], bool]) -> Tuple[DescriptionFailure, ...]:
    out = []
    for rep in reps:
        members = tuple(p for p in orbit_points_in(rep, periods, Fraction(-1), Fraction(3)) if member(p))
        if len(members) != 1:
            out.append(DescriptionFailure(rep, members))
    return tuple(out)


def fundamental_domain_report(ctx: FieldContext, window: int = 2, step: Fraction = Fraction(1, 2)) -> FundamentalDomainReport:
    """Orbit representatives of the grid step*Z^2 within [-window, window]^2, and where each description fails."""
    maps = root_coordinate_maps(ctx)
    periods = translation_periods(maps)
    count = int(Fraction(window) / step)
    ticks = [k * step for k in range(-count, count + 1)]
    grid = list(product(ticks, repeat=2))
    reps = tuple(sorted({canonical_representative(lam, periods) for lam in grid}))
    disagreements = tuple(
        lam for lam in grid if 0 <= lam[0] <= 2 and 0 <= lam[1] <= 1 and in_union_description(lam) != in_difference_description(lam)
    )
    return FundamentalDomainReport(
        periods=periods,
        grid_size=len(grid),
        representatives=reps,
        union_failures=_failures(reps, periods, in_union_description),
        difference_failures=_failures(reps, periods, in_difference_description),
        disagreements=disagreements,
    )
