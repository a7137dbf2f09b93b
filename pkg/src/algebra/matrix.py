"""Dense matrices over a FieldContext, plus the elementary operations used by the reductions.

A Matrix is a sympy DomainMatrix over GF(p)[u_1, ..., u_d] together with one
monic common denominator, so products, determinants and inverses run on
polynomials without any gcd.
"""

from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement

from ..errors import DimensionError, RankError, ShapeError
from .valued_field import FieldContext, FieldElem, common_denominator, strip_monomial

Rows = List[List[FieldElem]]
Entry = Union[FieldElem, int, str]


def _compact(ctx: FieldContext, polys: List[List[PolyElement]], den: PolyElement) -> Tuple[List[List[PolyElement]], PolyElement]:
    ring = ctx.ring
    lc = den.LC
    if lc != ring.domain.one:
        polys = [[x.quo_ground(lc) for x in row] for row in polys]
        den = den.quo_ground(lc)
    if len(den) > 1:
        divided = [[x.div(den) for x in row] for row in polys]
        if all(not r for row in divided for _, r in row):
            return [[q for q, _ in row] for row in divided], ring.one
    width = len(polys[0])
    flat = strip_monomial(ring, [x for row in polys for x in row] + [den])
    return [flat[i : i + width] for i in range(0, len(flat) - 1, width)], flat[-1]


class Matrix:
    """An immutable matrix over one context: entries num[i][j] / den."""

    __slots__ = ("ctx", "num", "den", "_rows")

    def __init__(self, ctx: FieldContext, rows: Iterable[Iterable[Entry]]):
        elems = tuple(tuple(ctx.elem(x) for x in row) for row in rows)
        if not elems or not elems[0]:
            raise ShapeError("matrix must have at least one row and one column")
        width = len(elems[0])
        if any(len(row) != width for row in elems):
            raise ShapeError("ragged matrix rows")
        ring = ctx.ring
        den = ring.one
        for row in elems:
            for x in row:
                if x:
                    den, _, _ = common_denominator(ring, den, x.frac.denom)
        polys = [[x.frac.numer * den.exquo(x.frac.denom) if x else ring.zero for x in row] for row in elems]
        self._set(ctx, polys, den)
        self._rows = elems

    @classmethod
    def _from_parts(cls, ctx: FieldContext, polys: List[List[PolyElement]], den: PolyElement) -> "Matrix":
        m = cls.__new__(cls)
        m._set(ctx, *_compact(ctx, polys, den))
        m._rows = None
        return m

    def _set(self, ctx: FieldContext, polys: List[List[PolyElement]], den: PolyElement):
        self.ctx = ctx
        self.num = DomainMatrix(polys, (len(polys), len(polys[0])), ctx.poly_domain)
        self.den = den

    @classmethod
    def identity(cls, ctx: FieldContext, n: int) -> "Matrix":
        return cls(ctx, [[ctx.one if i == j else ctx.zero for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, ctx: FieldContext, entries: Sequence[Entry]) -> "Matrix":
        entries = [ctx.elem(x) for x in entries]
        n = len(entries)
        return cls(ctx, [[entries[i] if i == j else ctx.zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, ctx: FieldContext, columns: Sequence[Sequence[Entry]]) -> "Matrix":
        return cls(ctx, zip(*columns))

    @property
    def nrows(self) -> int:
        return self.num.shape[0]

    @property
    def ncols(self) -> int:
        return self.num.shape[1]

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def _polys(self) -> List[List[PolyElement]]:
        return self.num.to_list()

    @property
    def rows(self) -> Tuple[Tuple[FieldElem, ...], ...]:
        if self._rows is None:
            self._rows = tuple(tuple(FieldElem(self.ctx, x, self.den) for x in row) for row in self._polys())
        return self._rows

    def __getitem__(self, index: Tuple[int, int]) -> FieldElem:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[FieldElem, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> List[Tuple[FieldElem, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def entries(self) -> Iterable[FieldElem]:
        for row in self.rows:
            yield from row

    def to_lists(self) -> Rows:
        return [list(row) for row in self.rows]

    def map(self, fn: Callable[[FieldElem], FieldElem], ctx: Optional[FieldContext] = None) -> "Matrix":
        return Matrix(ctx or self.ctx, [[fn(x) for x in row] for row in self.rows])

    def _check_ctx(self, other: "Matrix"):
        if other.ctx != self.ctx:
            raise DimensionError("matrices belong to different fields")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ctx != other.ctx or self.num.shape != other.num.shape:
            return False
        return self.num.scalarmul(other.den).to_list() == other.num.scalarmul(self.den).to_list()

    def __hash__(self) -> int:
        return hash((self.ctx, self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_ctx(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        return Matrix._from_parts(self.ctx, self.num.matmul(other.num).to_list(), self.den * other.den)

    def scale(self, c: Entry) -> "Matrix":
        c = self.ctx.elem(c)
        return Matrix._from_parts(self.ctx, self.num.scalarmul(c.frac.numer).to_list(), self.den * c.frac.denom)

    def transpose(self) -> "Matrix":
        return Matrix._from_parts(self.ctx, self.num.transpose().to_list(), self.den)

    def det(self) -> FieldElem:
        if not self.is_square:
            raise ShapeError("determinant of a non-square matrix")
        return FieldElem(self.ctx, self.num.det(), self.den**self.nrows)

    def inverse(self) -> "Matrix":
        """a * adj(N) / det(N) for self = N / a; raises RankError on singular input."""
        if not self.is_square:
            raise ShapeError("inverse of a non-square matrix")
        adjugate, det = self.num.adj_det()
        if not det:
            raise RankError()
        return Matrix._from_parts(self.ctx, adjugate.scalarmul(self.den).to_list(), det)

    def is_diagonal(self) -> bool:
        return all(not x for i, row in enumerate(self._polys()) for j, x in enumerate(row) if i != j)

    def monomial_pattern(self) -> Optional[List[int]]:
        """For a monomial matrix, `pattern[j]` is the row of the nonzero entry of column j."""
        if not self.is_square:
            return None
        polys = self._polys()
        pattern = []
        for j in range(self.ncols):
            rows = [i for i in range(self.nrows) if polys[i][j]]
            if len(rows) != 1:
                return None
            pattern.append(rows[0])
        if len(set(pattern)) != len(pattern):
            return None
        return pattern

    def is_monomial(self) -> bool:
        return self.monomial_pattern() is not None

    def is_upper_unitriangular(self) -> bool:
        return all(
            (x == self.den) if i == j else (not x) for i, row in enumerate(self._polys()) for j, x in enumerate(row) if i >= j
        )

    def is_lower_unitriangular(self) -> bool:
        return self.transpose().is_upper_unitriangular()

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.rows) + "]"

    def __repr__(self) -> str:
        return f"Matrix({self})"


def permutation_matrix(ctx: FieldContext, pattern: Sequence[int]) -> Matrix:
    """The matrix with a 1 at (pattern[j], j)."""
    n = len(pattern)
    return Matrix(ctx, [[ctx.one if pattern[j] == i else ctx.zero for j in range(n)] for i in range(n)])


def row_add(rows: Rows, target: int, source: int, c: FieldElem):
    """rows[target] += c * rows[source], i.e. left multiplication by I + c E_{target,source}."""
    if not c:
        return
    rows[target] = [x + c * y if y else x for x, y in zip(rows[target], rows[source])]


def col_add(rows: Rows, target: int, source: int, c: FieldElem):
    """col[target] += c * col[source], i.e. right multiplication by I + c E_{source,target}."""
    if not c:
        return
    for row in rows:
        if row[source]:
            row[target] = row[target] + c * row[source]


def swap_rows(rows: Rows, i: int, j: int):
    rows[i], rows[j] = rows[j], rows[i]


def swap_cols(rows: Rows, i: int, j: int):
    for row in rows:
        row[i], row[j] = row[j], row[i]


def scale_row(rows: Rows, i: int, c: FieldElem):
    rows[i] = [x * c for x in rows[i]]


def scale_col(rows: Rows, j: int, c: FieldElem):
    for row in rows:
        row[j] = row[j] * c


class TrackedReduction:
    """Reduce a matrix by elementary operations while keeping original = left @ work @ right."""

    def __init__(self, m: Matrix):
        self.ctx = m.ctx
        self.work = m.to_lists()
        self.left = Matrix.identity(m.ctx, m.nrows).to_lists()
        self.right = Matrix.identity(m.ctx, m.ncols).to_lists()

    def row_add(self, target: int, source: int, c: FieldElem):
        row_add(self.work, target, source, c)
        col_add(self.left, source, target, -c)

    def col_add(self, target: int, source: int, c: FieldElem):
        col_add(self.work, target, source, c)
        row_add(self.right, source, target, -c)

    def swap_rows(self, i: int, j: int):
        if i != j:
            swap_rows(self.work, i, j)
            swap_cols(self.left, i, j)

    def swap_cols(self, i: int, j: int):
        if i != j:
            swap_cols(self.work, i, j)
            swap_rows(self.right, i, j)

    def scale_col(self, j: int, c: FieldElem):
        scale_col(self.work, j, c)
        scale_row(self.right, j, c.inverse())

    def result(self) -> Tuple[Matrix, Matrix, Matrix]:
        return Matrix(self.ctx, self.left), Matrix(self.ctx, self.work), Matrix(self.ctx, self.right)
