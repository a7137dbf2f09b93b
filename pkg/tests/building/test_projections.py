"""Tests for the coarse projection and the residue description of its fibers."""

import random

import pytest

from src.algebra.matrix import Matrix
from src.algebra.ordered_values import LexVal
from src.algebra.valued_field import FieldContext
from src.building.groups import root_elem
from src.building.lattice import LatticeClass, class_eq, is_adjacent, rel_position
from src.building.projections import (
    CoarseContext,
    coarsen,
    in_fiber,
    kernel_element,
    lift,
    residue_class,
    stabilizes_fiber,
)
from src.errors import DimensionError, FiberError, SplitIndexError

CTX = FieldContext(p=2, d=2)
CC = CoarseContext(CTX, 1)
U = CTX.gen(1)
T = CTX.gen(2)


def fine(*entries) -> LatticeClass:
    return LatticeClass(Matrix.diag(CTX, entries), CTX.valuation)


COARSE_ORIGIN = LatticeClass.standard(CC.coarse, 2)


def test_split_index_must_leave_a_residue_field():
    with pytest.raises(SplitIndexError):
        CoarseContext(CTX, 2)


def test_coarsen_examples():
    assert class_eq(coarsen(fine(1, U), CC), COARSE_ORIGIN)
    assert class_eq(coarsen(fine(1, 1), CC), COARSE_ORIGIN)
    moved = coarsen(fine(1, T), CC)
    assert not class_eq(moved, COARSE_ORIGIN)
    assert is_adjacent(moved, COARSE_ORIGIN)


def test_coarsen_wants_a_fine_class():
    with pytest.raises(DimensionError):
        coarsen(COARSE_ORIGIN, CC)


def test_in_fiber_examples():
    for k in range(-3, 4):
        assert in_fiber(fine(1, U**k), COARSE_ORIGIN, CC)
    assert not in_fiber(fine(1, T), COARSE_ORIGIN, CC)
    member = fine(T, U / T)
    assert in_fiber(member, coarsen(member, CC), CC)


def test_residue_class_of_diag():
    res = residue_class(fine(1, U), COARSE_ORIGIN, CC)
    assert res.ctx == CC.residue_ctx
    standard = LatticeClass.standard(CC.residue_valuation, 2)
    assert rel_position(standard, res) == (LexVal.of(0), LexVal.of(1))


def test_residue_class_of_unimodular_class_is_the_base_point():
    member = LatticeClass(Matrix(CTX, [[1, T], [U, 1 + T * U]]), CTX.valuation)
    res = residue_class(member, COARSE_ORIGIN, CC)
    assert class_eq(res, LatticeClass.standard(CC.residue_valuation, 2))


def test_residue_class_outside_fiber():
    with pytest.raises(FiberError):
        residue_class(fine(1, T), COARSE_ORIGIN, CC)


def test_lift_round_trips():
    base = coarsen(fine(T, 1), CC)
    member = LatticeClass(Matrix(CTX, [[T, T * U], [0, U**3]]), CTX.valuation)
    assert in_fiber(member, base, CC)
    res = residue_class(member, base, CC)
    back = lift(res, base, CC)
    assert class_eq(back, member)
    assert class_eq(residue_class(back, base, CC), res)


def test_lift_of_base_point_projects_to_base():
    base = coarsen(fine(1, T**2), CC)
    lifted = lift(LatticeClass.standard(CC.residue_valuation, 2), base, CC)
    assert class_eq(coarsen(lifted, CC), base)


def test_rank_three_tower():
    ctx = FieldContext(p=2, d=3)
    u1, u3 = ctx.gen(1), ctx.gen(3)
    member = LatticeClass(Matrix.diag(ctx, [1, u1]), ctx.valuation)
    for s, expected in ((1, LexVal.of(0, 1)), (2, LexVal.of(1))):
        cc = CoarseContext(ctx, s)
        base = LatticeClass.standard(cc.coarse, 2)
        assert class_eq(coarsen(member, cc), base)
        res = residue_class(member, base, cc)
        assert rel_position(LatticeClass.standard(cc.residue_valuation, 2), res)[-1] == expected
        assert class_eq(lift(res, base, cc), member)
    cc = CoarseContext(ctx, 1)
    outside = LatticeClass(Matrix.diag(ctx, [1, u3]), ctx.valuation)
    assert not in_fiber(outside, LatticeClass.standard(cc.coarse, 2), cc)


def test_stabilizes_fiber():
    assert stabilizes_fiber(root_elem(CTX, 2, 1, 2, U.inverse()), COARSE_ORIGIN, CC)
    assert not stabilizes_fiber(Matrix.diag(CTX, [T, T.inverse()]), COARSE_ORIGIN, CC)


def test_kernel_elements_fix_the_fiber():
    rng = random.Random(3)
    base = coarsen(fine(1, T), CC)
    members = [LatticeClass(Matrix(CTX, [[1, 0], [U**k * T, T]]), CTX.valuation) for k in range(-2, 3)]
    for _ in range(5):
        h = kernel_element(rng, base, CC)
        assert h.det() == 1
        for member in members:
            assert in_fiber(member, base, CC)
            assert class_eq(LatticeClass(h @ member.basis, CTX.valuation), member)
