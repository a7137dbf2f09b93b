"""Seeded random field elements, group elements, lattice classes and ends.

Everything takes an explicit random.Random so a criterion run is
reproducible from its seed.
"""

import random
from typing import Optional

from ..algebra.matrix import Matrix
from ..algebra.ordered_values import LexVal
from ..algebra.valued_field import FieldContext, FieldElem, Valuation
from ..building.apartment import ApartmentPoint
from ..building.groups import root_elem, torus_elem, weyl_elem
from ..building.lattice import LatticeClass
from ..building.projections import CoarseContext
from ..building.sl2_boundary import End

VALUE_RANGE = (-3, 3)
MAX_FACTORS = 8


def random_value(rank: int, rng: random.Random, low: int = VALUE_RANGE[0], high: int = VALUE_RANGE[1]) -> LexVal:
    return LexVal.from_iter(rng.randint(low, high) for _ in range(rank))


def random_constant(ctx: FieldContext, rng: random.Random) -> FieldElem:
    """A nonzero element of F_p."""
    return ctx.const(rng.randrange(1, ctx.p))


def random_integral(ctx: FieldContext, rng: random.Random, terms: int = 3, max_degree: int = 2) -> FieldElem:
    """A polynomial in the letters; always in 𝕆, possibly zero."""
    out = ctx.zero
    for _ in range(terms):
        term = ctx.const(rng.randrange(ctx.p))
        for i in range(1, ctx.d + 1):
            term = term * ctx.gen(i) ** rng.randint(0, max_degree)
        out = out + term
    return out


def random_unit(ctx: FieldContext, rng: random.Random) -> FieldElem:
    """c0 + c1 * letter with c0 != 0: value zero for every coarsening."""
    return random_constant(ctx, rng) + rng.randrange(ctx.p) * ctx.gen(rng.randint(1, ctx.d))


def _nonzero_polynomial(ctx: FieldContext, rng: random.Random) -> FieldElem:
    poly = random_integral(ctx, rng)
    while not poly:
        poly = random_integral(ctx, rng)
    return poly


def random_elem(ctx: FieldContext, rng: random.Random) -> FieldElem:
    """P / Q for random nonzero polynomials of degree at most 2 in each letter."""
    return _nonzero_polynomial(ctx, rng) / _nonzero_polynomial(ctx, rng)


def random_point(n: int, rank: int, rng: random.Random) -> ApartmentPoint:
    return ApartmentPoint(tuple(random_value(rank, rng) for _ in range(n)))


def _balanced_values(n: int, rank: int, rng: random.Random):
    values = [random_value(rank, rng) for _ in range(n - 1)]
    total = LexVal.zero(rank)
    for v in values:
        total = total + v
    return values + [-total]


def random_sl(ctx: FieldContext, n: int, rng: random.Random, max_factors: int = MAX_FACTORS) -> Matrix:
    """A product of at most `max_factors` root and torus elements with values in [-3, 3]."""
    g = Matrix.identity(ctx, n)
    for _ in range(rng.randint(1, max_factors)):
        if rng.random() < 0.2:
            g = g @ torus_elem(ctx, _balanced_values(n, ctx.d, rng))
            continue
        i, j = rng.sample(range(1, n + 1), 2)
        c = random_constant(ctx, rng) * ctx.valuation.monomial(random_value(ctx.d, rng))
        g = g @ root_elem(ctx, n, i, j, c)
    return g


def _unit_torus(ctx: FieldContext, n: int, rng: random.Random) -> Matrix:
    a = random_unit(ctx, rng)
    diag = [ctx.one] * n
    k = rng.randrange(n - 1)
    diag[k], diag[k + 1] = a, a.inverse()
    return Matrix.diag(ctx, diag)


def random_sl_integral(ctx: FieldContext, n: int, rng: random.Random, factors: int = 4) -> Matrix:
    """An element of SL_n(𝕆): integral root elements and a unit torus element."""
    g = Matrix.identity(ctx, n)
    for _ in range(factors):
        i, j = rng.sample(range(1, n + 1), 2)
        g = g @ root_elem(ctx, n, i, j, random_integral(ctx, rng))
    return g @ _unit_torus(ctx, n, rng)


def random_iwahori(ctx: FieldContext, n: int, rng: random.Random, factors: int = 4) -> Matrix:
    """An Iwahori element: integral root elements above the diagonal, ideal ones below, a unit torus."""
    g = Matrix.identity(ctx, n)
    for _ in range(factors):
        i, j = rng.sample(range(1, n + 1), 2)
        c = random_integral(ctx, rng)
        g = g @ root_elem(ctx, n, i, j, c if i < j else c * ctx.gen(1))
    return g @ _unit_torus(ctx, n, rng)


def random_upper_unipotent(ctx: FieldContext, n: int, rng: random.Random) -> Matrix:
    """An upper unitriangular matrix with random field entries above the diagonal."""
    g = Matrix.identity(ctx, n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            g = g @ root_elem(ctx, n, i, j, random_elem(ctx, rng))
    return g


def random_fiber_member(base: LatticeClass, cc: CoarseContext, rng: random.Random, factors: int = 4) -> LatticeClass:
    """[B Y] for the basis B of `base` and Y in SL_n(𝒪) with a random residue.

    Half the root factors carry c u^k with u a residue letter, so the residue
    of Y is generally far from the identity; the rest are integral.
    """
    ctx = cc.ctx
    n = base.n
    y = Matrix.identity(ctx, n)
    for _ in range(factors):
        i, j = rng.sample(range(1, n + 1), 2)
        if rng.random() < 0.5:
            c = random_constant(ctx, rng)
            for letter in range(1, ctx.d - cc.s + 1):
                c = c * ctx.gen(letter) ** rng.randint(*VALUE_RANGE)
        else:
            c = random_integral(ctx, rng)
        y = y @ root_elem(ctx, n, i, j, c)
    return LatticeClass(base.basis @ y @ _unit_torus(ctx, n, rng), cc.fine)


def random_sl_outside(ctx: FieldContext, n: int, rng: random.Random) -> Matrix:
    """k1 x_α(c) k2 with k1, k2 in SL_n(𝕆) and val(c) < 0, so never in SL_n(𝕆)."""
    value = random_value(ctx.d, rng)
    while not value < LexVal.zero(ctx.d):
        value = random_value(ctx.d, rng)
    i, j = rng.sample(range(1, n + 1), 2)
    c = random_constant(ctx, rng) * ctx.valuation.monomial(value)
    return random_sl_integral(ctx, n, rng) @ root_elem(ctx, n, i, j, c) @ random_sl_integral(ctx, n, rng)


def random_monomial_sl(ctx: FieldContext, n: int, rng: random.Random, factors: int = 3) -> Matrix:
    """A product of Weyl elements m_α(c) and torus elements: a monomial matrix of det 1."""
    g = Matrix.identity(ctx, n)
    for _ in range(factors):
        i, j = rng.sample(range(1, n + 1), 2)
        c = random_constant(ctx, rng) * ctx.valuation.monomial(random_value(ctx.d, rng))
        g = g @ weyl_elem(ctx, n, i, j, c)
    return g @ torus_elem(ctx, _balanced_values(n, ctx.d, rng))


def random_class(ctx: FieldContext, n: int, rng: random.Random, valuation: Optional[Valuation] = None) -> LatticeClass:
    """g.[diag(x_λ)] for random g in SL_n(K) and λ in [-3, 3]^d; reaches every vertex type."""
    valuation = valuation or ctx.valuation
    g = random_sl(ctx, n, rng, max_factors=4)
    d = Matrix.diag(ctx, [ctx.valuation.monomial(random_value(ctx.d, rng, -2, 2)) for _ in range(n)])
    return LatticeClass(g @ d, valuation)


def random_end(ctx: FieldContext, rng: random.Random) -> End:
    b1, b2 = random_sl(ctx, 2, rng, max_factors=4).columns()
    return End(ctx, b1, b2)
