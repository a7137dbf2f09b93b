"""Tests for F_p(u_1, ..., u_d) and its lexicographic valuation."""

import random

import pytest

from src.algebra.ordered_values import LexVal
from src.algebra.valued_field import (
    FieldContext,
    Valuation,
    coarse_residue,
    field_op,
    monomial,
    parse_elem,
    residue,
    unit_part,
    val,
    variable_names,
)
from src.errors import (
    DegreeBoundExceeded,
    DimensionError,
    DomainError,
    ElementParseError,
    FieldDivisionError,
    NotInValuationRingError,
    SplitIndexError,
)
from src.verify.sampling import random_integral, random_unit

CTX = FieldContext(p=2, d=2)
U = CTX.gen(1)
T = CTX.gen(2)


def test_variable_names():
    assert variable_names(1) == ("u",)
    assert variable_names(2) == ("u", "t")
    assert variable_names(3) == ("u1", "u2", "u3")


def test_context_rejects_composite_characteristic():
    with pytest.raises(DomainError):
        FieldContext(p=4, d=2)


def test_field_op_examples():
    assert field_op("add", T, U) == parse_elem(CTX, "t + u")
    assert field_op("mul", T, T.inverse()) == 1
    quotient = field_op("div", CTX.one, 1 + T)
    assert quotient * (1 + T) == 1
    assert val(quotient) == LexVal.of(0, 0)


def test_characteristic_is_respected():
    assert T + T == 0
    ctx3 = FieldContext(p=3, d=2)
    t3 = ctx3.gen(2)
    assert t3 + t3 + t3 == 0
    assert t3 + t3 == -t3


def test_division_by_zero():
    with pytest.raises(FieldDivisionError):
        CTX.one / CTX.zero
    with pytest.raises(FieldDivisionError):
        CTX.zero.inverse()
    with pytest.raises(FieldDivisionError):
        parse_elem(CTX, "1/(t + t)")


def test_val_examples():
    assert val(parse_elem(CTX, "t^2*u^-3")) == LexVal.of(2, -3)
    assert val(CTX.zero) == LexVal.inf(2)
    assert val(T + U) == LexVal.of(0, 1)


def test_val_of_every_small_monomial():
    for a in range(-3, 4):
        for b in range(-3, 4):
            assert val(T**a * U**b) == LexVal.of(a, b)


def test_val_is_a_valuation_on_examples():
    f = (1 + U) / (T * U**2)
    g = T**3 + U
    assert val(f * g) == val(f) + val(g)
    assert val(f + g) >= min(val(f), val(g))


def test_canonical_form_makes_equality_structural():
    a = (T**2 - 1) / (T - 1)
    assert a == T + 1
    assert hash(a) == hash(T + 1)
    assert a.denom == CTX.ring.one


def test_monomial_examples():
    assert monomial(CTX, LexVal.of(2, -1)) == T**2 / U
    assert monomial(CTX, LexVal.of(0, 0)) == 1
    assert monomial(CTX, LexVal.of(0, 1)) == U
    with pytest.raises(DomainError):
        monomial(CTX, LexVal.inf(2))
    with pytest.raises(DimensionError):
        monomial(CTX, LexVal.of(1))


def test_residue_examples():
    assert residue(1 + T) == 1
    r = residue(U / (1 + T))
    assert r.ctx == FieldContext(p=2, d=1)
    assert r == r.ctx.gen(1)
    assert residue(T) == 0
    with pytest.raises(NotInValuationRingError):
        residue(1 / T)


def test_coarse_residue_in_rank_three():
    ctx = FieldContext(p=3, d=3)
    u1, u2, u3 = ctx.gen(1), ctx.gen(2), ctx.gen(3)
    f = (u1 + u2 + u3) / (1 + u3**2)
    r1 = coarse_residue(f, 1)
    assert r1.ctx.d == 2
    assert r1 == r1.ctx.gen(1) + r1.ctx.gen(2)
    r2 = coarse_residue(f, 2)
    assert r2 == r2.ctx.gen(1)
    with pytest.raises(SplitIndexError):
        coarse_residue(f, 3)


def test_unit_part_is_a_unit():
    f = (1 + U) * T**2 / U**3
    part = unit_part(f)
    assert val(part) == LexVal.of(0, 0)
    coarse = Valuation(CTX, 1)
    assert coarse(unit_part(f, coarse)) == LexVal.of(0)


def test_embed_pads_the_coarse_letters():
    rctx = CTX.residue_context(1)
    assert CTX.embed(rctx.gen(1)) == U


def test_parse_and_format_round_trip():
    for text in ["0", "1", "u", "t^2/u^3", "(t + u)/(1 + t*u)", "u^-2 - t", "3*t"]:
        f = parse_elem(CTX, text)
        assert parse_elem(CTX, str(f)) == f
    assert str(U) == "u"
    assert str(parse_elem(CTX, "t^2*u^-3")) == "t^2/u^3"


def test_parse_accepts_indexed_letters():
    assert parse_elem(CTX, "u2 * u1") == T * U


def test_parse_rejects_bad_input():
    with pytest.raises(ElementParseError):
        parse_elem(CTX, "x + 1")
    with pytest.raises(ElementParseError):
        parse_elem(CTX, "t; import os")
    with pytest.raises(ElementParseError):
        parse_elem(CTX, "t +")


def test_degree_bound():
    small = FieldContext(p=2, d=2, degree_bound=4)
    t = small.gen(2)
    assert val(t**4) == LexVal.of(4, 0)
    with pytest.raises(DegreeBoundExceeded):
        t**5


def _coarse_integral(rng: random.Random):
    """An element of the coarse valuation ring: unbounded in u, bounded below in t."""
    numer = random_integral(CTX, rng) * U ** rng.randint(-3, 3) * T ** rng.randint(0, 1)
    return numer / random_unit(CTX, rng)


class TestResidueMap:
    def test_is_additive(self):
        rng = random.Random(12)
        for _ in range(40):
            x, y = _coarse_integral(rng), _coarse_integral(rng)
            assert residue(x + y) == residue(x) + residue(y)

    def test_is_multiplicative(self):
        rng = random.Random(13)
        for _ in range(40):
            x, y = _coarse_integral(rng), _coarse_integral(rng)
            assert residue(x * y) == residue(x) * residue(y)

    def test_kernel_is_the_maximal_ideal(self):
        rng = random.Random(14)
        coarse = CTX.coarse_valuation(1)
        seen = set()
        for _ in range(40):
            x = _coarse_integral(rng)
            if not x:
                continue
            in_ideal = coarse(x).is_positive()
            seen.add(in_ideal)
            assert (residue(x) == 0) == in_ideal
        assert seen == {True, False}


def test_unreduced_sum_equals_its_canonical_form():
    x = (1 + U) / (1 + T) + (T + U) / (1 + T)
    assert x == 1
    assert x == CTX.one
    assert hash(x) == hash(CTX.one)
    assert x.numer == CTX.ring.one and x.denom == CTX.ring.one


def test_equality_of_fractions_with_different_representatives():
    a = (1 + U) * (1 + T) / ((1 + T) * (1 + U * T))
    b = (1 + U) / (1 + U * T)
    assert a == b
    assert a - b == 0
    assert a != b + 1


def test_degree_bound_cancels_before_raising():
    small = FieldContext(p=2, d=2, degree_bound=4)
    t = small.gen(2)
    a = 1 / ((1 + t) * (1 + t + t**2))
    b = 1 / (1 + t) ** 2
    total = a + b
    assert total == t**2 / ((1 + t) ** 2 * (1 + t + t**2))
    assert total.is_reduced
    assert val(total) == LexVal.of(2, 0)
