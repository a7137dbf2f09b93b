"""The value group Z^d with lexicographic order, plus the infinite value of zero."""

import re
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable, Optional, Tuple

from ..errors import DimensionError, DomainError, SplitIndexError


class Ordering(str, Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


class ProjectionMode(str, Enum):
    """Which convex subgroup quotient `project` lands in."""

    AT_MOST = "<=s"
    BELOW = "<s"


@total_ordering
@dataclass(frozen=True, eq=False)
class LexVal:
    """An element of Z^d, or the infinite value when `coords` is None.

    Finite values compare lexicographically, coordinate 1 being the most
    significant. Infinity exceeds every finite value of the same rank.
    """

    dim: int
    coords: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.dim < 0:
            raise DomainError(f"rank must be non-negative, got {self.dim}")
        if self.coords is not None and len(self.coords) != self.dim:
            raise DimensionError(f"expected {self.dim} coordinates, got {len(self.coords)}")

    @classmethod
    def of(cls, *coords: int) -> "LexVal":
        return cls(len(coords), tuple(int(c) for c in coords))

    @classmethod
    def from_iter(cls, coords: Iterable[int]) -> "LexVal":
        return cls.of(*coords)

    @classmethod
    def zero(cls, dim: int) -> "LexVal":
        return cls(dim, (0,) * dim)

    @classmethod
    def inf(cls, dim: int) -> "LexVal":
        return cls(dim, None)

    @property
    def is_inf(self) -> bool:
        return self.coords is None

    @property
    def is_zero(self) -> bool:
        return self.coords is not None and not any(self.coords)

    def is_positive(self) -> bool:
        """True for values strictly above zero, infinity included."""
        return self > LexVal.zero(self.dim)

    def is_non_negative(self) -> bool:
        return self >= LexVal.zero(self.dim)

    def _check_dim(self, other: "LexVal"):
        if not isinstance(other, LexVal):
            raise TypeError(f"cannot combine LexVal with {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"value ranks differ: {self.dim} vs {other.dim}")

    def __eq__(self, other):
        if not isinstance(other, LexVal):
            return NotImplemented
        return self.dim == other.dim and self.coords == other.coords

    def __hash__(self):
        return hash((self.dim, self.coords))

    def __lt__(self, other: "LexVal") -> bool:
        self._check_dim(other)
        if self.is_inf:
            return False
        if other.is_inf:
            return True
        return self.coords < other.coords

    def __add__(self, other: "LexVal") -> "LexVal":
        self._check_dim(other)
        if self.is_inf or other.is_inf:
            return LexVal.inf(self.dim)
        return LexVal(self.dim, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LexVal":
        if self.is_inf:
            raise DomainError("infinity has no negative")
        return LexVal(self.dim, tuple(-a for a in self.coords))

    def __sub__(self, other: "LexVal") -> "LexVal":
        self._check_dim(other)
        if other.is_inf:
            raise DomainError("cannot subtract infinity")
        return self + (-other)

    def __mul__(self, k: int) -> "LexVal":
        if not isinstance(k, int):
            return NotImplemented
        if self.is_inf:
            if k <= 0:
                raise DomainError("infinity can only be scaled by a positive integer")
            return self
        return LexVal(self.dim, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_lexval(self)

    def __repr__(self) -> str:
        return f"LexVal{format_lexval(self)}"


def lex_cmp(a: LexVal, b: LexVal) -> Ordering:
    if a < b:
        return Ordering.LT
    if a == b:
        return Ordering.EQ
    return Ordering.GT


def project(a: LexVal, s: int, mode: ProjectionMode = ProjectionMode.AT_MOST) -> LexVal:
    """Truncate to the first s coordinates (or s-1 for mode "<s")."""
    if not 1 <= s <= a.dim:
        raise SplitIndexError(f"projection index must satisfy 1 <= s <= {a.dim}, got {s}")
    keep = s if ProjectionMode(mode) is ProjectionMode.AT_MOST else s - 1
    if a.is_inf:
        return LexVal.inf(keep)
    return LexVal(keep, a.coords[:keep])


def convex_subgroup_split(a: LexVal, s: int) -> Tuple[LexVal, LexVal]:
    """Split a finite value into its coarse head (first s coordinates) and fine tail."""
    if not 1 <= s < a.dim:
        raise SplitIndexError(f"split index must satisfy 1 <= s < {a.dim}, got {s}")
    if a.is_inf:
        raise DomainError("infinity has no convex subgroup components")
    return LexVal(s, a.coords[:s]), LexVal(a.dim - s, a.coords[s:])


def abs_val(a: LexVal) -> LexVal:
    if a.is_inf:
        raise DomainError("absolute value of infinity is undefined")
    return -a if a < LexVal.zero(a.dim) else a


def lex_min(values: Iterable[LexVal]) -> LexVal:
    values = list(values)
    if not values:
        raise DomainError("minimum of an empty collection")
    return min(values)


def lex_sum(values: Iterable[LexVal], dim: int) -> LexVal:
    total = LexVal.zero(dim)
    for value in values:
        total = total + value
    return total


_LEXVAL_RE = re.compile(r"^\(\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*,?\s*\)$")


def parse_lexval(text: str, dim: Optional[int] = None) -> LexVal:
    """Read "(a1,...,ad)" or "inf". Infinity needs `dim` to know its rank."""
    cleaned = text.strip()
    if cleaned.lower() in ("inf", "∞"):
        if dim is None:
            raise DomainError("rank of an infinite value must be given explicitly")
        return LexVal.inf(dim)
    match = _LEXVAL_RE.match(cleaned)
    if not match or match.group(1) is None:
        raise DomainError(f"not a value-group element: {text!r}")
    value = LexVal.from_iter(int(part) for part in match.group(1).split(","))
    if dim is not None and value.dim != dim:
        raise DimensionError(f"expected {dim} coordinates in {text!r}")
    return value


def format_lexval(a: LexVal) -> str:
    if a.is_inf:
        return "inf"
    return "(" + ",".join(str(c) for c in a.coords) + ")"
