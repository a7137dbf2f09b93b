"""Homothety classes of 𝕆-lattices in K^n and the metric structure between them.

A class is stored as a basis matrix whose columns span the lattice over the
valuation ring of `valuation`. The same code serves the fine building (full
valuation) and the coarse one (a truncated valuation with ring 𝒪).
"""

import random
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

from ..algebra.matrix import Matrix, TrackedReduction
from ..algebra.ordered_values import LexVal, lex_min, lex_sum
from ..algebra.valued_field import FieldContext, Valuation
from ..errors import DimensionError, DomainError, GroupMembershipError, RankError, ShapeError
from .apartment import ApartmentPoint


@dataclass(frozen=True, eq=False)
class LatticeClass:
    basis: Matrix
    valuation: Valuation

    def __post_init__(self):
        if not self.basis.is_square:
            raise ShapeError("a lattice basis must be square")
        if self.basis.nrows < 2:
            raise ShapeError("lattice classes need n >= 2")
        if self.basis.ctx != self.valuation.ctx:
            raise DimensionError("basis and valuation belong to different fields")
        if not self.basis.det():
            raise RankError("lattice basis is singular")

    @classmethod
    def standard(cls, valuation: Valuation, n: int) -> "LatticeClass":
        return cls(Matrix.identity(valuation.ctx, n), valuation)

    @property
    def ctx(self) -> FieldContext:
        return self.basis.ctx

    @property
    def n(self) -> int:
        return self.basis.nrows

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeClass):
            return NotImplemented
        return class_eq(self, other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"LatticeClass({self.basis}, rank={self.valuation.rank})"


def _check_pair(l1: LatticeClass, l2: LatticeClass):
    if l1.n != l2.n:
        raise DimensionError(f"lattices in K^{l1.n} and K^{l2.n}")
    if l1.valuation != l2.valuation:
        raise DimensionError("lattice classes use different valuations")


class SmithForm(NamedTuple):
    """M = P @ D @ Q with P, Q invertible over the valuation ring and D diagonal monomial."""

    P: Matrix
    D: Matrix
    Q: Matrix
    invariants: Tuple[LexVal, ...]


def smith_form(m: Matrix, valuation: Optional[Valuation] = None, rng: Optional[random.Random] = None) -> SmithForm:
    """Smith normal form over the valuation ring.

    Each step pivots on an entry of minimal value; ties go to the smallest
    (row, column) unless `rng` is given, in which case one is drawn at random.
    The invariant values come out nondecreasing.
    """
    valuation = valuation or m.ctx.valuation
    if not m.is_square:
        raise ShapeError("smith_form expects a square matrix")
    n = m.nrows
    red = TrackedReduction(m)
    a = red.work
    for k in range(n):
        candidates = [(valuation(a[i][j]), i, j) for i in range(k, n) for j in range(k, n) if a[i][j]]
        if not candidates:
            raise RankError()
        least = min(v for v, _, _ in candidates)
        ties = [(i, j) for v, i, j in candidates if v == least]
        i, j = rng.choice(ties) if rng else min(ties)
        red.swap_rows(k, i)
        red.swap_cols(k, j)
        pivot_inv = a[k][k].inverse()
        for i in range(k + 1, n):
            if a[i][k]:
                red.row_add(i, k, -(a[i][k] * pivot_inv))
        for j in range(k + 1, n):
            if a[k][j]:
                red.col_add(j, k, -(a[k][j] * pivot_inv))
    invariants = []
    for k in range(n):
        value = valuation(a[k][k])
        unit = a[k][k] / valuation.monomial(value)
        red.scale_col(k, unit.inverse())
        invariants.append(value)
    P, D, Q = red.result()
    return SmithForm(P, D, Q, tuple(invariants))


def _relative_matrix(l1: LatticeClass, l2: LatticeClass) -> Matrix:
    _check_pair(l1, l2)
    return l1.basis.inverse() @ l2.basis


def class_eq(l1: LatticeClass, l2: LatticeClass) -> bool:
    """True iff B1^{-1} B2 is a scalar multiple of a matrix in GL_n of the valuation ring."""
    m = _relative_matrix(l1, l2)
    valuation = l1.valuation
    mu = lex_min(valuation(x) for x in m.entries())
    scaled = m.scale(valuation.monomial(-mu))
    if not all(valuation.in_ring(x) for x in scaled.entries()):
        return False
    return valuation.is_unit(scaled.det())


def invariant_values(l1: LatticeClass, l2: LatticeClass) -> Tuple[LexVal, ...]:
    return smith_form(_relative_matrix(l1, l2), l1.valuation).invariants


def rel_position(l1: LatticeClass, l2: LatticeClass) -> Tuple[LexVal, ...]:
    """Sorted invariant values of B1^{-1} B2, shifted so the smallest is zero."""
    invariants = invariant_values(l1, l2)
    base = invariants[0]
    return tuple(v - base for v in invariants)


def dist_max(l1: LatticeClass, l2: LatticeClass) -> LexVal:
    return rel_position(l1, l2)[-1]


def dist_sum(l1: LatticeClass, l2: LatticeClass) -> LexVal:
    """Sum over i < j of (ν_j - ν_i) for the sorted invariants ν."""
    nu = rel_position(l1, l2)
    n = len(nu)
    return lex_sum((nu[j] - nu[i] for i in range(n) for j in range(i + 1, n)), l1.valuation.rank)


def dist_index(l1: LatticeClass, l2: LatticeClass) -> LexVal:
    """Value of the index of L2 in L1 once both are normalized so that L2 <= L1."""
    return lex_sum(rel_position(l1, l2), l1.valuation.rank)


class CommonApartment(NamedTuple):
    basis: Matrix
    x1: ApartmentPoint
    x2: ApartmentPoint


def common_apartment(l1: LatticeClass, l2: LatticeClass) -> CommonApartment:
    """A frame in which both classes are diagonal, with their coordinates there."""
    sf = smith_form(_relative_matrix(l1, l2), l1.valuation)
    basis = l1.basis @ sf.P
    rank = l1.valuation.rank
    return CommonApartment(basis, ApartmentPoint.origin(l1.n, rank), ApartmentPoint(sf.invariants))


def psi(lattice: LatticeClass) -> ApartmentPoint:
    """Apartment coordinates of a class spanned by multiples of the standard basis vectors."""
    pattern = lattice.basis.monomial_pattern()
    if pattern is None:
        raise ShapeError("class is not diagonal in the standard basis; use common_apartment first")
    coords = [None] * lattice.n
    for j, i in enumerate(pattern):
        coords[i] = lattice.valuation(lattice.basis[i, j])
    return ApartmentPoint(tuple(coords))


def psi_inv(x: ApartmentPoint, valuation: Valuation) -> LatticeClass:
    if x.dim != valuation.rank:
        raise DimensionError(f"point has rank-{x.dim} coordinates, valuation has rank {valuation.rank}")
    return LatticeClass(Matrix.diag(valuation.ctx, [valuation.monomial(c) for c in x.coords]), valuation)


def require_special_linear(g: Matrix):
    if not g.is_square:
        raise ShapeError("group elements are square matrices")
    if g.det() != 1:
        raise GroupMembershipError(f"det {g.det()} != 1")


def act(g: Matrix, lattice: LatticeClass) -> LatticeClass:
    require_special_linear(g)
    if g.nrows != lattice.n:
        raise DimensionError(f"{g.nrows}x{g.nrows} matrix acting on K^{lattice.n}")
    return LatticeClass(g @ lattice.basis, lattice.valuation)


def is_adjacent(l1: LatticeClass, l2: LatticeClass) -> bool:
    """Neighbours in the tree: distance equal to the smallest positive value (0,...,0,1)."""
    unit = LexVal.of(*([0] * (l1.valuation.rank - 1) + [1]))
    return dist_max(l1, l2) == unit


def dedupe_classes(classes: List[LatticeClass]) -> List[LatticeClass]:
    out: List[LatticeClass] = []
    for c in classes:
        if not any(class_eq(c, seen) for seen in out):
            out.append(c)
    return out


def reinterpret(lattice: LatticeClass, valuation: Valuation) -> LatticeClass:
    """Same basis matrix read over another valuation of the same field."""
    if valuation.ctx != lattice.ctx:
        raise DomainError("valuation belongs to a different field")
    return LatticeClass(lattice.basis, valuation)
