"""Projection from the fine building to a coarser one, and fibers as residue buildings.

For a split index s the coarse valuation keeps the first s coordinates. Its
ring 𝒪 contains 𝕆, and its residue field is the tower on the d - s finest
letters with the induced valuation. A fiber over a coarse vertex [L] is then
identified with the lattice building over that residue field.
"""

import random
from dataclasses import dataclass
from functools import cached_property

from ..algebra.matrix import Matrix
from ..algebra.ordered_values import lex_min
from ..algebra.valued_field import FieldContext, Valuation, coarse_residue
from ..errors import DimensionError, FiberError
from .lattice import LatticeClass, act, class_eq, reinterpret


@dataclass(frozen=True)
class CoarseContext:
    ctx: FieldContext
    s: int

    def __post_init__(self):
        # raises SplitIndexError unless 1 <= s < d
        self.ctx.coarse_valuation(self.s)

    @cached_property
    def fine(self) -> Valuation:
        return self.ctx.valuation

    @cached_property
    def coarse(self) -> Valuation:
        return self.ctx.coarse_valuation(self.s)

    @cached_property
    def residue_ctx(self) -> FieldContext:
        return self.ctx.residue_context(self.s)

    @cached_property
    def residue_valuation(self) -> Valuation:
        return self.residue_ctx.valuation


def _require(lattice: LatticeClass, valuation: Valuation, label: str):
    if lattice.valuation != valuation:
        raise DimensionError(f"{label} class is not over the expected valuation (rank {valuation.rank} of d={valuation.ctx.d})")


def coarsen(lattice: LatticeClass, cc: CoarseContext) -> LatticeClass:
    """π([L]) = [𝒪 L]: the same basis read over the coarse valuation ring."""
    _require(lattice, cc.fine, "fine")
    return reinterpret(lattice, cc.coarse)


def in_fiber(fine: LatticeClass, base: LatticeClass, cc: CoarseContext) -> bool:
    _require(base, cc.coarse, "coarse")
    return class_eq(coarsen(fine, cc), base)


def residue_class(fine: LatticeClass, base: LatticeClass, cc: CoarseContext) -> LatticeClass:
    """Res_L: scale the fine basis into L, express it in L's basis, reduce modulo ℳ."""
    if not in_fiber(fine, base, cc):
        raise FiberError()
    m = base.basis.inverse() @ fine.basis
    mu = lex_min(cc.coarse(x) for x in m.entries())
    scaled = m.scale(cc.coarse.monomial(-mu))
    reduced = scaled.map(lambda x: coarse_residue(x, cc.s), ctx=cc.residue_ctx)
    return LatticeClass(reduced, cc.residue_valuation)


def lift(residue: LatticeClass, base: LatticeClass, cc: CoarseContext) -> LatticeClass:
    """Section of Res_L: embed the residue basis into 𝒪 and multiply into L's basis."""
    _require(base, cc.coarse, "coarse")
    _require(residue, cc.residue_valuation, "residue")
    embedded = residue.basis.map(cc.ctx.embed, ctx=cc.ctx)
    return LatticeClass(base.basis @ embedded, cc.fine)


def stabilizes_fiber(g: Matrix, base: LatticeClass, cc: CoarseContext) -> bool:
    """True iff g maps the fiber over [L] to itself, i.e. g fixes [L] coarsely."""
    _require(base, cc.coarse, "coarse")
    return class_eq(act(g, base), base)


def kernel_element(rng: random.Random, base: LatticeClass, cc: CoarseContext, factors: int = 4) -> Matrix:
    """A random g with det 1 and g = I mod ℳ relative to the basis of [L].

    Built as B X B^{-1} where X is a product of root elements x_α(c) with c
    in ℳ, so X reduces to the identity in SL_n(𝒪/ℳ).
    """
    _require(base, cc.coarse, "coarse")
    ctx = cc.ctx
    n = base.n
    t = ctx.coarse_letter
    x = Matrix.identity(ctx, n)
    for _ in range(factors):
        i, j = rng.sample(range(n), 2)
        rows = Matrix.identity(ctx, n).to_lists()
        c = t * (rng.randrange(ctx.p) + rng.randrange(ctx.p) * ctx.gen(rng.randint(1, ctx.d)))
        rows[i][j] = c
        x = x @ Matrix(ctx, rows)
    return base.basis @ x @ base.basis.inverse()
