"""Root groups, the affine Weyl group action, and Iwasawa/Bruhat factorizations of SL_n.

All reductions here run a TrackedReduction so each factor is recovered
exactly; the left and right factors are built only from elementary
operations that are legal in the subgroup they are meant to lie in.
"""

import random
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from ..algebra.matrix import Matrix, TrackedReduction, permutation_matrix
from ..algebra.ordered_values import LexVal
from ..algebra.valued_field import FieldContext, FieldElem, Valuation
from ..errors import DimensionError, DomainError, GroupMembershipError, NotInNormalizerError, RankError
from .apartment import ApartmentPoint, Root
from .lattice import LatticeClass, act, class_eq, psi, psi_inv, require_special_linear


@dataclass(frozen=True)
class AffineWeylElem:
    """x -> perm.x + trans on the apartment.

    `perm[j]` is the image of coordinate j (0-based); the translation is kept
    with its first coordinate at zero.
    """

    perm: Tuple[int, ...]
    trans: Tuple[LexVal, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(n)):
            raise DomainError(f"{self.perm} is not a permutation of 0..{n - 1}")
        if len(self.trans) != n:
            raise DimensionError("translation and permutation sizes differ")
        object.__setattr__(self, "perm", tuple(self.perm))
        object.__setattr__(self, "trans", ApartmentPoint(tuple(self.trans)).coords)

    @classmethod
    def identity(cls, n: int, dim: int) -> "AffineWeylElem":
        return cls(tuple(range(n)), tuple(LexVal.zero(dim) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def dim(self) -> int:
        return self.trans[0].dim

    @property
    def is_translation(self) -> bool:
        return self.perm == tuple(range(self.n))

    def apply(self, x: ApartmentPoint) -> ApartmentPoint:
        if x.n != self.n or x.dim != self.dim:
            raise DimensionError("Weyl element and point come from different apartments")
        moved: List[Optional[LexVal]] = [None] * self.n
        for j, target in enumerate(self.perm):
            moved[target] = x.coords[j]
        return ApartmentPoint(tuple(a + b for a, b in zip(moved, self.trans)))

    __call__ = apply

    def compose(self, other: "AffineWeylElem") -> "AffineWeylElem":
        """self after other."""
        if other.n != self.n:
            raise DimensionError("Weyl elements of different rank")
        perm = tuple(self.perm[other.perm[j]] for j in range(self.n))
        moved: List[Optional[LexVal]] = [None] * self.n
        for j, target in enumerate(self.perm):
            moved[target] = other.trans[j]
        return AffineWeylElem(perm, tuple(a + b for a, b in zip(moved, self.trans)))

    __matmul__ = compose

    def inverse(self) -> "AffineWeylElem":
        inv = [0] * self.n
        for j, target in enumerate(self.perm):
            inv[target] = j
        trans: List[Optional[LexVal]] = [None] * self.n
        for i in range(self.n):
            trans[inv[i]] = -self.trans[i]
        return AffineWeylElem(tuple(inv), tuple(trans))

    def __str__(self) -> str:
        perm = ",".join(str(j + 1) for j in self.perm)
        return f"[{perm}] + ({', '.join(str(t) for t in self.trans)})"


def _check_indices(n: int, i: int, j: int):
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise DomainError(f"({i},{j}) is not a root of SL_{n}")


def root_elem(ctx: FieldContext, n: int, i: int, j: int, c: Union[FieldElem, int, str]) -> Matrix:
    """x_{α_{i,j}}(c): I + c E_{i,j} above the diagonal, I - c E_{i,j} below."""
    _check_indices(n, i, j)
    c = ctx.elem(c)
    rows = Matrix.identity(ctx, n).to_lists()
    rows[i - 1][j - 1] = c if i < j else -c
    return Matrix(ctx, rows)


def weyl_elem(ctx: FieldContext, n: int, i: int, j: int, c: Union[FieldElem, int, str]) -> Matrix:
    """m_{α_{i,j}}(c) = x_α(c) x_{-α}(c^{-1}) x_α(c)."""
    c = ctx.elem(c)
    if not c:
        raise DomainError("m_α(c) needs c != 0")
    x = root_elem(ctx, n, i, j, c)
    return x @ root_elem(ctx, n, j, i, c.inverse()) @ x


def nu_action(m: Matrix, valuation: Optional[Valuation] = None) -> AffineWeylElem:
    """The affine map by which a monomial matrix of determinant 1 moves the standard apartment."""
    valuation = valuation or m.ctx.valuation
    pattern = m.monomial_pattern()
    if pattern is None:
        raise NotInNormalizerError()
    require_special_linear(m)
    trans: List[Optional[LexVal]] = [None] * m.nrows
    for j, i in enumerate(pattern):
        trans[i] = valuation(m[i, j])
    return AffineWeylElem(tuple(pattern), tuple(trans))


def reflection(n: int, i: int, j: int, lam: LexVal) -> AffineWeylElem:
    """r_{α_{i,j}, λ}: the reflection in the wall {α_{i,j} = -λ}."""
    _check_indices(n, i, j)
    perm = list(range(n))
    perm[i - 1], perm[j - 1] = j - 1, i - 1
    trans = [LexVal.zero(lam.dim) for _ in range(n)]
    trans[i - 1] = lam
    trans[j - 1] = -lam
    return AffineWeylElem(tuple(perm), tuple(trans))


def translation(vector: Sequence[LexVal]) -> AffineWeylElem:
    return AffineWeylElem(tuple(range(len(vector))), tuple(vector))


def torus_elem(ctx: FieldContext, values: Sequence[LexVal], valuation: Optional[Valuation] = None) -> Matrix:
    """diag(x_{λ_1}, ..., x_{λ_n}); the values must sum to zero so the determinant is 1."""
    valuation = valuation or ctx.valuation
    total = LexVal.zero(valuation.rank)
    for v in values:
        total = total + v
    if not total.is_zero:
        raise GroupMembershipError(f"torus values sum to {total}, not zero")
    return Matrix.diag(ctx, [valuation.monomial(v) for v in values])


def double_affine_generators(ctx: FieldContext) -> Dict[str, Matrix]:
    """w0, w1, w2 for SL_2: m_α(1), m_α(u), m_α(t)."""
    return {
        "w0": weyl_elem(ctx, 2, 1, 2, ctx.one),
        "w1": weyl_elem(ctx, 2, 1, 2, ctx.gen(1)),
        "w2": weyl_elem(ctx, 2, 1, 2, ctx.coarse_letter),
    }


def is_in_iwahori(g: Matrix, valuation: Optional[Valuation] = None) -> bool:
    """Integral entries, strictly lower entries in the maximal ideal."""
    require_special_linear(g)
    valuation = valuation or g.ctx.valuation
    for i, row in enumerate(g.rows):
        for j, x in enumerate(row):
            if i > j:
                if not valuation.in_ideal(x):
                    return False
            elif not valuation.in_ring(x):
                return False
    return True


def _point_valuation(ctx: FieldContext, x: ApartmentPoint) -> Valuation:
    return ctx.valuation if x.dim == ctx.d else Valuation(ctx, x.dim)


def is_in_parahoric(g: Matrix, x: ApartmentPoint) -> bool:
    """True iff g fixes the vertex psi_inv(x)."""
    lattice = psi_inv(x, _point_valuation(g.ctx, x))
    return class_eq(act(g, lattice), lattice)


def parahoric_conjugate_test(g: Matrix, x: ApartmentPoint) -> bool:
    """Membership in D SL_n(𝕆) D^{-1} for D = diag(x_{λ_i}); agrees with is_in_parahoric."""
    require_special_linear(g)
    valuation = _point_valuation(g.ctx, x)
    d = Matrix.diag(g.ctx, [valuation.monomial(c) for c in x.coords])
    return all(valuation.in_ring(e) for e in (d.inverse() @ g @ d).entries())


class Facet(str, Enum):
    """Which subgroup the right factor of an Iwasawa decomposition is taken in."""

    CHAMBER = "chamber"
    VERTEX = "vertex"


class IwasawaDecomposition(NamedTuple):
    u: Matrix
    m: Matrix
    k: Matrix

    @property
    def weyl(self) -> AffineWeylElem:
        return nu_action(self.m)


class BruhatDecomposition(NamedTuple):
    b1: Matrix
    m: Matrix
    b2: Matrix

    @property
    def weyl(self) -> AffineWeylElem:
        return nu_action(self.m)


def _shuffled(items: List[int], rng: Optional[random.Random]) -> List[int]:
    if rng:
        rng.shuffle(items)
    return items


def _echelon(g: Matrix, valuation: Valuation, facet: Facet, rng: Optional[random.Random]) -> Tuple[Matrix, Matrix, Matrix]:
    """g = U @ A @ K with U upper unitriangular, A monomial, K integral.

    Rows are handled bottom-up. The pivot of a row is its leftmost entry of
    minimal value among unused columns, so every column operation is an
    Iwahori operation; in vertex mode an rng breaks ties at random instead.
    Otherwise an rng only permutes the clearing operations of a step, which
    all pivot on the same fixed row and column, so the factors do not change.
    """
    n = g.nrows
    red = TrackedReduction(g)
    a = red.work
    active = list(range(n))
    for r in reversed(range(n)):
        candidates = [(valuation(a[r][c]), c) for c in active if a[r][c]]
        if not candidates:
            raise RankError()
        least = min(v for v, _ in candidates)
        ties = [c for v, c in candidates if v == least]
        pivot = rng.choice(ties) if rng and facet is Facet.VERTEX else ties[0]
        for c in _shuffled([c for c in active if c != pivot], rng):
            if a[r][c]:
                red.col_add(c, pivot, -(a[r][c] / a[r][pivot]))
        for i in _shuffled(list(range(r)), rng):
            if a[i][pivot]:
                red.row_add(i, r, -(a[i][pivot] / a[r][pivot]))
        active.remove(pivot)
    return red.result()


def _diagonalize_monomial(m: Matrix, k: Matrix) -> Tuple[Matrix, Matrix]:
    """Move a signed permutation from m into k so that m becomes diagonal."""
    ctx = m.ctx
    pattern = m.monomial_pattern()
    w = permutation_matrix(ctx, pattern).transpose()
    if w.det() != 1:
        rows = w.to_lists()
        for row in rows:
            row[0] = -row[0]
        w = Matrix(ctx, rows)
    return m @ w, w.inverse() @ k


def iwasawa(
    g: Matrix,
    facet: Union[Facet, str] = Facet.CHAMBER,
    rng: Optional[random.Random] = None,
    valuation: Optional[Valuation] = None,
) -> IwasawaDecomposition:
    """g = u @ m @ k with u upper unitriangular and m monomial.

    With the chamber facet k lies in the Iwahori subgroup, which pins ν(m)
    down completely. With the vertex facet k lies in SL_n(𝕆) and m is made
    diagonal, so ν(m) is a translation.
    """
    facet = Facet(facet)
    require_special_linear(g)
    valuation = valuation or g.ctx.valuation
    u, m, k = _echelon(g, valuation, facet, rng)
    if facet is Facet.VERTEX:
        m, k = _diagonalize_monomial(m, k)
    return IwasawaDecomposition(u, m, k)


def bruhat(g: Matrix, rng: Optional[random.Random] = None, valuation: Optional[Valuation] = None) -> BruhatDecomposition:
    """g = b1 @ m @ b2 with b1, b2 Iwahori and m monomial.

    Pivot on an entry of globally minimal value in the remaining block, taking
    the bottommost row and then the leftmost column among ties; that choice
    makes every clearing operation an Iwahori operation. The pivot is never
    random: an rng only permutes the clearing operations of a step, and the
    factors come out the same in any order.
    """
    require_special_linear(g)
    valuation = valuation or g.ctx.valuation
    n = g.nrows
    red = TrackedReduction(g)
    a = red.work
    rows_left = list(range(n))
    cols_left = list(range(n))
    while rows_left:
        entries = [(valuation(a[i][j]), i, j) for i in rows_left for j in cols_left if a[i][j]]
        if not entries:
            raise RankError()
        least = min(v for v, _, _ in entries)
        r = max(i for v, i, _ in entries if v == least)
        c = min(j for v, i, j in entries if v == least and i == r)
        for j in _shuffled([j for j in cols_left if j != c], rng):
            if a[r][j]:
                red.col_add(j, c, -(a[r][j] / a[r][c]))
        for i in _shuffled([i for i in rows_left if i != r], rng):
            if a[i][c]:
                red.row_add(i, r, -(a[i][c] / a[r][c]))
        rows_left.remove(r)
        cols_left.remove(c)
    return BruhatDecomposition(*red.result())


def _reversal(ctx: FieldContext, n: int) -> Matrix:
    return permutation_matrix(ctx, list(reversed(range(n))))


def retract_to_apartment(lattice: LatticeClass, sign: str = "+") -> ApartmentPoint:
    """Retraction onto the standard apartment from the (anti)dominant chamber at infinity.

    Writes the basis as u @ m @ k with u upper ("+") or lower ("-")
    unitriangular and returns the coordinates of m.
    """
    if sign not in ("+", "-"):
        raise DomainError(f"chamber sign must be '+' or '-', got {sign!r}")
    basis = lattice.basis
    if sign == "+":
        _, m, _ = _echelon(basis, lattice.valuation, Facet.CHAMBER, None)
    else:
        j = _reversal(basis.ctx, basis.nrows)
        _, m, _ = _echelon(j @ basis @ j, lattice.valuation, Facet.CHAMBER, None)
        m = j @ m @ j
    return psi(LatticeClass(m, lattice.valuation))


class IwahoriFactorization(NamedTuple):
    """g = prod(positive) @ prod(negative) @ torus, each factor a root element x_α(c)."""

    positive: Tuple[Tuple[int, int, FieldElem], ...]
    negative: Tuple[Tuple[int, int, FieldElem], ...]
    torus: Matrix

    def product(self) -> Matrix:
        ctx = self.torus.ctx
        n = self.torus.nrows
        out = Matrix.identity(ctx, n)
        for i, j, c in self.positive + self.negative:
            out = out @ root_elem(ctx, n, i, j, c)
        return out @ self.torus


def _factor_unipotent(target: Matrix, order: Sequence[Root]) -> Tuple[Tuple[int, int, FieldElem], ...]:
    """Coefficients c_α with prod x_α(c_α) (in `order`) equal to a unitriangular target.

    Solved one height at a time: the entry at (i, j) sees c_{(i,j)} linearly
    and otherwise only coefficients of lower height.
    """
    ctx = target.ctx
    n = target.nrows
    coeffs: Dict[Root, FieldElem] = {root: ctx.zero for root in order}
    for height in sorted({abs(j - i) for i, j in order}):
        product = Matrix.identity(ctx, n)
        for i, j in order:
            product = product @ root_elem(ctx, n, i, j, coeffs[(i, j)])
        for i, j in order:
            if abs(j - i) == height:
                residual = target[i - 1, j - 1] - product[i - 1, j - 1]
                coeffs[(i, j)] = residual if i < j else -residual
    return tuple((i, j, coeffs[(i, j)]) for i, j in order)


def _check_order(order: Sequence[Root], expected: List[Root], label: str):
    if sorted(order) != sorted(expected) or len(set(order)) != len(order):
        raise DomainError(f"{label} order must list each {label} root exactly once")


def iwahori_factorization(
    g: Matrix,
    positive_order: Optional[Sequence[Root]] = None,
    negative_order: Optional[Sequence[Root]] = None,
) -> IwahoriFactorization:
    """Write an Iwahori element as positive root elements, then negative ones, then a unit torus element."""
    if not is_in_iwahori(g):
        raise GroupMembershipError("matrix is not in the Iwahori subgroup")
    ctx = g.ctx
    n = g.nrows
    positives = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    negatives = [(j, i) for i, j in positives]
    positive_order = list(positive_order or positives)
    negative_order = list(negative_order or negatives)
    _check_order(positive_order, positives, "positive")
    _check_order(negative_order, negatives, "negative")

    red = TrackedReduction(g)
    a = red.work
    for k in reversed(range(n)):
        for i in range(k):
            if a[i][k]:
                red.row_add(i, k, -(a[i][k] / a[k][k]))
    upper, lower_times_diag, _ = red.result()
    diag = [lower_times_diag[k, k] for k in range(n)]
    lower = Matrix(ctx, [[x / diag[j] for j, x in enumerate(row)] for row in lower_times_diag.rows])
    return IwahoriFactorization(
        positive=_factor_unipotent(upper, positive_order),
        negative=_factor_unipotent(lower, negative_order),
        torus=Matrix.diag(ctx, diag),
    )
