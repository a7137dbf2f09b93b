"""Exact arithmetic in K_d = F_p(u_1, ..., u_d) with its lexicographic valuation.

Elements live in sympy's FracField over GF(p). Each arithmetic step strips
monomial content and cancels exact divisors; the full multivariate gcd is
taken only when an element reaches the degree bound or a canonical form is
asked for; equality of unreduced fractions is decided by cross-multiplication.

The valuation of a monomial u_1^{e_1} ... u_d^{e_d} is (e_d, ..., e_1): u_d
is the coarsest uniformizer. For d = 2 the letters are named u = u_1 and
t = u_2, so val(t^a * u^b) = (a, b).
"""

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import GF, Domain
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from ..errors import (
    DegreeBoundExceeded,
    DimensionError,
    DomainError,
    ElementParseError,
    FieldDivisionError,
    NotInValuationRingError,
    SplitIndexError,
)
from .ordered_values import LexVal

Monom = Tuple[int, ...]

_SHORT_NAMES = {1: ("u",), 2: ("u", "t")}


def variable_names(d: int) -> Tuple[str, ...]:
    return _SHORT_NAMES.get(d) or tuple(f"u{i}" for i in range(1, d + 1))


@dataclass(frozen=True)
class FieldContext:
    """The field F_p(u_1, ..., u_d) together with its degree guard."""

    p: int = 2
    d: int = 2
    degree_bound: int = 64

    def __post_init__(self):
        if not sympy.isprime(self.p):
            raise DomainError(f"p must be prime, got {self.p}")
        if self.d < 1:
            raise DomainError(f"field rank must be at least 1, got {self.d}")
        if self.degree_bound < 1:
            raise DomainError(f"degree bound must be positive, got {self.degree_bound}")

    @cached_property
    def names(self) -> Tuple[str, ...]:
        return variable_names(self.d)

    @cached_property
    def field(self) -> FracField:
        return FracField(self.names, GF(self.p, symmetric=False), lex)

    @cached_property
    def ring(self) -> PolyRing:
        return self.field.ring

    @cached_property
    def poly_domain(self) -> Domain:
        """GF(p)[u_1, ..., u_d] as a sympy domain, for DomainMatrix."""
        return self.ring.to_domain()

    @cached_property
    def zero(self) -> "FieldElem":
        return FieldElem.from_reduced(self, self.ring.zero, self.ring.one)

    @cached_property
    def one(self) -> "FieldElem":
        return FieldElem.from_reduced(self, self.ring.one, self.ring.one)

    def const(self, c: int) -> "FieldElem":
        return FieldElem(self, self.ring(c % self.p))

    def gen(self, i: int) -> "FieldElem":
        """The letter u_i, 1-based."""
        if not 1 <= i <= self.d:
            raise DomainError(f"no letter u{i} in a rank-{self.d} field")
        return FieldElem.from_reduced(self, self.ring.gens[i - 1], self.ring.one)

    @property
    def coarse_letter(self) -> "FieldElem":
        return self.gen(self.d)

    def elem(self, value: Union["FieldElem", int, str]) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise DimensionError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return self.const(value)
        return parse_elem(self, value)

    @cached_property
    def valuation(self) -> "Valuation":
        return Valuation(self, self.d)

    def coarse_valuation(self, s: int) -> "Valuation":
        if not 1 <= s < self.d:
            raise SplitIndexError(f"split index must satisfy 1 <= s < {self.d}, got {s}")
        return Valuation(self, s)

    def residue_context(self, s: int) -> "FieldContext":
        """Residue field of the rank-s coarsening: the tower on the d - s finest letters."""
        if not 1 <= s < self.d:
            raise SplitIndexError(f"split index must satisfy 1 <= s < {self.d}, got {s}")
        return FieldContext(self.p, self.d - s, self.degree_bound)

    def embed(self, f: "FieldElem") -> "FieldElem":
        """Include an element of a residue context, letter by letter from the finest."""
        if f.ctx.p != self.p or f.ctx.d > self.d:
            raise DimensionError("element does not come from a residue field of this field")
        pad = (0,) * (self.d - f.ctx.d)
        numer = self.ring.from_dict({m + pad: c for m, c in f.frac.numer.items()})
        denom = self.ring.from_dict({m + pad: c for m, c in f.frac.denom.items()})
        return FieldElem._make(self, numer, denom, f.is_reduced)


def strip_monomial(ring: PolyRing, polys: Sequence[PolyElement]) -> List[PolyElement]:
    """Divide every nonzero poly by the largest monomial dividing all of them."""
    common: Optional[Monom] = None
    for poly in polys:
        for m in poly.keys():
            common = m if common is None else tuple(map(min, common, m))
    if common is None or not any(common):
        return list(polys)
    return [ring.from_dict({tuple(a - g for a, g in zip(m, common)): c for m, c in poly.items()}) for poly in polys]


def common_denominator(ring: PolyRing, d1: PolyElement, d2: PolyElement) -> Tuple[PolyElement, PolyElement, PolyElement]:
    """(D, f1, f2) with D = d1 * f1 = d2 * f2, found without a gcd."""
    if d1 == d2:
        return d1, ring.one, ring.one
    if len(d1) == 1 and len(d2) == 1:
        # monic monomials: the lcm takes the larger exponent letter by letter
        m1, m2 = next(iter(d1.keys())), next(iter(d2.keys()))
        top = tuple(map(max, m1, m2))
        f1 = ring.from_dict({tuple(a - b for a, b in zip(top, m1)): ring.domain.one})
        f2 = ring.from_dict({tuple(a - b for a, b in zip(top, m2)): ring.domain.one})
        return d1 * f1, f1, f2
    q, r = d1.div(d2)
    if not r:
        return d1, ring.one, q
    q, r = d2.div(d1)
    if not r:
        return d2, q, ring.one
    return d1 * d2, d2, d1


def _cross_cancel(ring: PolyRing, numer: PolyElement, denom: PolyElement) -> Tuple[PolyElement, PolyElement]:
    """Cancel numer against denom when one divides the other exactly."""
    if len(denom) > 1:
        q, r = numer.div(denom)
        if not r:
            return q, ring.one
    if len(numer) > 1:
        q, r = denom.div(numer)
        if not r:
            return ring.one, q
    return numer, denom


def _max_degree(poly: PolyElement) -> int:
    if not poly:
        return 0
    return max(poly.degrees())


def _monic(ring: PolyRing, numer: PolyElement, denom: PolyElement) -> Tuple[PolyElement, PolyElement]:
    lc = denom.LC
    if lc != ring.domain.one:
        return numer.quo_ground(lc), denom.quo_ground(lc)
    return numer, denom


def _settle(ctx: "FieldContext", numer: PolyElement, denom: PolyElement, reduced: bool) -> Tuple[PolyElement, PolyElement, bool]:
    ring = ctx.ring
    if not denom:
        raise FieldDivisionError()
    if not numer:
        return ring.zero, ring.one, True
    numer, denom = _monic(ring, numer, denom)
    if not reduced:
        numer, denom = strip_monomial(ring, [numer, denom])
        # a monomial denominator shares no factor with a numerator free of monomial content
        reduced = len(denom) == 1
    degree = max(_max_degree(numer), _max_degree(denom))
    if not reduced and degree > ctx.degree_bound:
        frac = ctx.field.new(numer, denom)
        numer, denom = _monic(ring, frac.numer, frac.denom)
        reduced = True
        degree = max(_max_degree(numer), _max_degree(denom))
    if degree > ctx.degree_bound:
        raise DegreeBoundExceeded(f"degree {degree} exceeds the bound {ctx.degree_bound}")
    return numer, denom, reduced


class FieldElem:
    """An exact element of K_d, held as a sympy FracElement.

    The stored fraction has a monic denominator and no common monomial
    factor; full cancellation is deferred until `numer`/`denom`, hashing or
    printing ask for the canonical form.
    """

    __slots__ = ("ctx", "frac", "_canonical", "_hash")

    def __init__(self, ctx: FieldContext, numer: PolyElement, denom: Optional[PolyElement] = None):
        self._set(ctx, *_settle(ctx, numer, ctx.ring.one if denom is None else denom, False))

    @classmethod
    def _make(cls, ctx: FieldContext, numer: PolyElement, denom: PolyElement, reduced: bool = False) -> "FieldElem":
        elem = cls.__new__(cls)
        elem._set(ctx, *_settle(ctx, numer, denom, reduced))
        return elem

    @classmethod
    def from_reduced(cls, ctx: FieldContext, numer: PolyElement, denom: PolyElement) -> "FieldElem":
        """Wrap a numerator/denominator pair that is already coprime with monic denominator."""
        return cls._make(ctx, numer, denom, reduced=True)

    def _set(self, ctx: FieldContext, numer: PolyElement, denom: PolyElement, reduced: bool):
        self.ctx = ctx
        self.frac = ctx.field.raw_new(numer, denom)
        self._canonical = self.frac if reduced else None
        self._hash = None

    @property
    def is_reduced(self) -> bool:
        return self._canonical is self.frac

    @property
    def canonical(self) -> FracElement:
        if self._canonical is None:
            frac = self.ctx.field.new(self.frac.numer, self.frac.denom)
            self._canonical = self.ctx.field.raw_new(*_monic(self.ctx.ring, frac.numer, frac.denom))
        return self._canonical

    @property
    def numer(self) -> PolyElement:
        return self.canonical.numer

    @property
    def denom(self) -> PolyElement:
        return self.canonical.denom

    def _coerce(self, other) -> Optional["FieldElem"]:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise DimensionError("elements belong to different fields")
            return other
        if isinstance(other, int):
            return self.ctx.const(other)
        return None

    def __bool__(self) -> bool:
        return bool(self.frac.numer)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.frac, other.frac
        if self.is_reduced and other.is_reduced:
            return a.numer == b.numer and a.denom == b.denom
        return a.numer * b.denom == b.numer * a.denom

    def __hash__(self) -> int:
        if self._hash is None:
            p = self.ctx.p
            self._hash = hash(
                (
                    self.ctx,
                    frozenset((m, int(c) % p) for m, c in self.numer.items()),
                    frozenset((m, int(c) % p) for m, c in self.denom.items()),
                )
            )
        return self._hash

    def __add__(self, other) -> "FieldElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other:
            return self
        if not self:
            return other
        n1, d1 = self.frac.numer, self.frac.denom
        n2, d2 = other.frac.numer, other.frac.denom
        common, f1, f2 = common_denominator(self.ctx.ring, d1, d2)
        return FieldElem._make(self.ctx, n1 * f1 + n2 * f2, common)

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        return FieldElem._make(self.ctx, -self.frac.numer, self.frac.denom, self.is_reduced)

    def __sub__(self, other) -> "FieldElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "FieldElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "FieldElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self or not other:
            return self.ctx.zero
        ring = self.ctx.ring
        n1, d2 = _cross_cancel(ring, self.frac.numer, other.frac.denom)
        n2, d1 = _cross_cancel(ring, other.frac.numer, self.frac.denom)
        return FieldElem._make(self.ctx, n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if not self:
            raise FieldDivisionError()
        return FieldElem._make(self.ctx, self.frac.denom, self.frac.numer, self.is_reduced)

    def __truediv__(self, other) -> "FieldElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "FieldElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int) -> "FieldElem":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 1:
            return self
        # powers of a reduced pair stay coprime with monic denominator
        return FieldElem._make(self.ctx, self.frac.numer**k, self.frac.denom**k, self.is_reduced)

    def __str__(self) -> str:
        return format_elem(self)

    def __repr__(self) -> str:
        return f"FieldElem({format_elem(self)!r})"


class FieldOp(str, Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


def field_op(kind: Union[FieldOp, str], f: FieldElem, g: FieldElem) -> FieldElem:
    kind = FieldOp(kind)
    if kind is FieldOp.ADD:
        return f + g
    if kind is FieldOp.SUB:
        return f - g
    if kind is FieldOp.MUL:
        return f * g
    return f / g


def _coarse_key(monom: Monom, rank: int) -> Monom:
    d = len(monom)
    return tuple(monom[d - 1 - k] for k in range(rank))


def _poly_key(poly: PolyElement, rank: int) -> Monom:
    return min(_coarse_key(m, rank) for m in poly.keys())


@dataclass(frozen=True)
class Valuation:
    """The valuation of `ctx` truncated to its `rank` coarsest coordinates.

    rank == ctx.d is the full valuation; a smaller rank s is the coarsening
    whose ring is 𝒪 and whose maximal ideal is ℳ.
    """

    ctx: FieldContext
    rank: int

    def __post_init__(self):
        if not 1 <= self.rank <= self.ctx.d:
            raise SplitIndexError(f"valuation rank must satisfy 1 <= r <= {self.ctx.d}, got {self.rank}")

    @property
    def is_fine(self) -> bool:
        return self.rank == self.ctx.d

    @property
    def zero_value(self) -> LexVal:
        return LexVal.zero(self.rank)

    def __call__(self, f: FieldElem) -> LexVal:
        if f.ctx != self.ctx:
            raise DimensionError("element belongs to a different field")
        if not f:
            return LexVal.inf(self.rank)
        top = _poly_key(f.frac.numer, self.rank)
        bottom = _poly_key(f.frac.denom, self.rank)
        return LexVal(self.rank, tuple(a - b for a, b in zip(top, bottom)))

    def monomial(self, lam: LexVal) -> FieldElem:
        """x_λ: the product of the coarsest letters raised to the coordinates of λ."""
        if lam.is_inf:
            raise DomainError("no monomial has infinite value")
        if lam.dim != self.rank:
            raise DimensionError(f"expected a rank-{self.rank} value, got {lam}")
        d = self.ctx.d
        up = [0] * d
        down = [0] * d
        for k, e in enumerate(lam.coords):
            if e >= 0:
                up[d - 1 - k] = e
            else:
                down[d - 1 - k] = -e
        ring = self.ctx.ring
        one = ring.domain.one
        return FieldElem.from_reduced(self.ctx, ring.from_dict({tuple(up): one}), ring.from_dict({tuple(down): one}))

    def in_ring(self, f: FieldElem) -> bool:
        return self(f) >= self.zero_value

    def in_ideal(self, f: FieldElem) -> bool:
        return self(f) > self.zero_value

    def is_unit(self, f: FieldElem) -> bool:
        return self(f) == self.zero_value

    def unit_part(self, f: FieldElem) -> FieldElem:
        """f divided by the monomial of its value; a unit for this valuation."""
        if not f:
            raise DomainError("zero has no unit part")
        return f / self.monomial(self(f))


def val(f: FieldElem) -> LexVal:
    return f.ctx.valuation(f)


def monomial(ctx: FieldContext, lam: LexVal) -> FieldElem:
    return ctx.valuation.monomial(lam)


def unit_part(f: FieldElem, valuation: Optional[Valuation] = None) -> FieldElem:
    return (valuation or f.ctx.valuation).unit_part(f)


def _lead_part(poly: PolyElement, s: int, keep: int) -> Dict[Monom, object]:
    key = _poly_key(poly, s)
    return {m[:keep]: c for m, c in poly.items() if _coarse_key(m, s) == key}


def coarse_residue(f: FieldElem, s: int) -> FieldElem:
    """Image of f in the residue field of the rank-s coarsening.

    Defined on 𝒪; elements of ℳ map to 0. On units the coarse leading
    monomials of numerator and denominator cancel and what remains is a
    ratio of polynomials in the d - s finest letters.
    """
    ctx = f.ctx
    rctx = ctx.residue_context(s)
    if not f:
        return rctx.zero
    value = ctx.coarse_valuation(s)(f)
    if value < LexVal.zero(s):
        raise NotInValuationRingError(f"{f} has coarse value {value}")
    if value.is_positive():
        return rctx.zero
    keep = rctx.d
    numer = rctx.ring.from_dict(_lead_part(f.frac.numer, s, keep))
    denom = rctx.ring.from_dict(_lead_part(f.frac.denom, s, keep))
    return FieldElem(rctx, numer, denom)


def residue(f: FieldElem) -> FieldElem:
    """Evaluate the coarsest letter at 0 on the coarse valuation ring."""
    return coarse_residue(f, 1)


_ALLOWED_TEXT = re.compile(r"^[0-9A-Za-z_+\-*/^()\s]+$")
_IDENTIFIER = re.compile(r"[A-Za-z_]\w*")


def _symbol_table(ctx: FieldContext) -> Dict[str, sympy.Symbol]:
    table = {name: sympy.Symbol(name) for name in ctx.names}
    for i, name in enumerate(ctx.names, start=1):
        table.setdefault(f"u{i}", table[name])
    return table


def parse_elem(ctx: FieldContext, text: str) -> FieldElem:
    """Read an element written with integers, the field's letters and + - * / ^ ( )."""
    if not isinstance(text, str) or not _ALLOWED_TEXT.match(text):
        raise ElementParseError(f"invalid characters in field element {text!r}")
    table = _symbol_table(ctx)
    unknown = set(_IDENTIFIER.findall(text)) - set(table)
    if unknown:
        raise ElementParseError(f"unknown letters {sorted(unknown)} in {text!r}; expected {sorted(table)}")
    try:
        expr = parse_expr(text, local_dict=dict(table), transformations=standard_transformations + (convert_xor,))
    except Exception as e:
        raise ElementParseError(f"could not parse {text!r}: {e}") from e
    if expr.has(sympy.zoo, sympy.nan, sympy.oo):
        raise FieldDivisionError(f"division by zero in {text!r}")
    top, bottom = sympy.fraction(sympy.together(expr))
    try:
        numer = ctx.ring.from_expr(top)
        denom = ctx.ring.from_expr(bottom)
    except (ValueError, TypeError) as e:
        raise ElementParseError(f"{text!r} is not a rational function over GF({ctx.p})") from e
    if not denom:
        raise FieldDivisionError(f"denominator of {text!r} vanishes mod {ctx.p}")
    return FieldElem(ctx, numer, denom)


def _format_poly(ctx: FieldContext, poly: PolyElement) -> str:
    if not poly:
        return "0"
    terms = []
    for monom, coeff in poly.terms():
        c = int(coeff) % ctx.p
        factors = []
        # coarsest letter first
        for name, e in reversed(list(zip(ctx.names, monom))):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            terms.append(str(c))
        elif c == 1:
            terms.append("*".join(factors))
        else:
            terms.append(f"{c}*" + "*".join(factors))
    return " + ".join(terms)


def format_elem(f: FieldElem) -> str:
    """Canonical text; parse_elem reads it back to an equal element."""
    top = _format_poly(f.ctx, f.numer)
    if f.denom == f.ctx.ring.one:
        return top
    bottom = _format_poly(f.ctx, f.denom)
    if len(f.numer) > 1:
        top = f"({top})"
    if len(f.denom) > 1 or "*" in bottom:
        bottom = f"({bottom})"
    return f"{top}/{bottom}"
