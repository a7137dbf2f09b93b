"""Tests for the lexicographic value group."""

import pytest

from src.algebra.ordered_values import (
    LexVal,
    Ordering,
    ProjectionMode,
    abs_val,
    convex_subgroup_split,
    format_lexval,
    lex_cmp,
    lex_min,
    parse_lexval,
    project,
)
from src.errors import DimensionError, DomainError, SplitIndexError


def test_lex_cmp_examples():
    assert lex_cmp(LexVal.of(0, 5), LexVal.of(1, -10)) == Ordering.LT
    assert lex_cmp(LexVal.of(1, 0), LexVal.of(1, 0)) == Ordering.EQ
    assert lex_cmp(LexVal.of(2, 3), LexVal.inf(2)) == Ordering.LT
    assert lex_cmp(LexVal.inf(2), LexVal.of(2, 3)) == Ordering.GT


def test_lex_cmp_rejects_mixed_ranks():
    with pytest.raises(DimensionError):
        lex_cmp(LexVal.of(1, 2), LexVal.of(1, 2, 3))


def test_project_truncates():
    assert project(LexVal.of(2, 7), 1) == LexVal.of(2)
    assert project(LexVal.inf(2), 1) == LexVal.inf(1)
    assert project(LexVal.of(0, -3, 1), 2, "<=s") == LexVal.of(0, -3)
    assert project(LexVal.of(0, -3, 1), 2, ProjectionMode.BELOW) == LexVal.of(0)


def test_project_index_out_of_range():
    with pytest.raises(SplitIndexError):
        project(LexVal.of(1, 2), 3)
    with pytest.raises(SplitIndexError):
        project(LexVal.of(1, 2), 0)


def test_abs_val():
    assert abs_val(LexVal.of(-1, 4)) == LexVal.of(1, -4)
    assert abs_val(LexVal.of(0, 0)) == LexVal.of(0, 0)
    assert abs_val(LexVal.of(0, 2)) == LexVal.of(0, 2)
    with pytest.raises(DomainError):
        abs_val(LexVal.inf(2))


def test_arithmetic_and_infinity():
    a, b = LexVal.of(1, -2), LexVal.of(0, 5)
    assert a + b == LexVal.of(1, 3)
    assert a - b == LexVal.of(1, -7)
    assert 3 * b == LexVal.of(0, 15)
    assert (a + LexVal.inf(2)).is_inf
    assert LexVal.of(0, 1).is_positive()
    assert not LexVal.of(-1, 9).is_positive()
    with pytest.raises(DomainError):
        -LexVal.inf(2)


def test_convex_subgroup_split():
    head, tail = convex_subgroup_split(LexVal.of(3, -1, 2), 1)
    assert head == LexVal.of(3)
    assert tail == LexVal.of(-1, 2)
    with pytest.raises(SplitIndexError):
        convex_subgroup_split(LexVal.of(3, -1), 2)


def test_lex_min_prefers_coarse_coordinate():
    assert lex_min([LexVal.of(1, -100), LexVal.of(0, 100), LexVal.inf(2)]) == LexVal.of(0, 100)


def test_text_form():
    assert format_lexval(LexVal.of(2, -3)) == "(2,-3)"
    assert format_lexval(LexVal.inf(2)) == "inf"
    assert parse_lexval(" ( 2, -3 ) ") == LexVal.of(2, -3)
    assert parse_lexval("inf", dim=2) == LexVal.inf(2)
    with pytest.raises(DomainError):
        parse_lexval("inf")
    with pytest.raises(DomainError):
        parse_lexval("2,3")
    with pytest.raises(DimensionError):
        parse_lexval("(1,2)", dim=3)
