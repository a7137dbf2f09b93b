"""Tests for lattice classes, Smith forms and the distances between classes."""

import random

import pytest

from src.algebra.matrix import Matrix
from src.algebra.ordered_values import LexVal
from src.algebra.valued_field import FieldContext
from src.building.apartment import ApartmentPoint
from src.building.lattice import (
    LatticeClass,
    act,
    class_eq,
    common_apartment,
    dedupe_classes,
    dist_index,
    dist_max,
    dist_sum,
    is_adjacent,
    psi,
    psi_inv,
    rel_position,
    smith_form,
)
from src.errors import GroupMembershipError, RankError, ShapeError
from src.verify.sampling import random_class, random_sl

CTX = FieldContext(p=2, d=2)
V = CTX.valuation
U = CTX.gen(1)
T = CTX.gen(2)


def lattice(rows) -> LatticeClass:
    return LatticeClass(Matrix(CTX, rows), V)


def diag(*entries) -> LatticeClass:
    return LatticeClass(Matrix.diag(CTX, entries), V)


I2 = diag(1, 1)


def val(a: int, b: int) -> LexVal:
    return LexVal.of(a, b)


class TestSmithForm:
    def test_examples(self):
        assert smith_form(Matrix.diag(CTX, [T, 1])).invariants == (val(0, 0), val(1, 0))
        assert smith_form(Matrix.identity(CTX, 2)).invariants == (val(0, 0), val(0, 0))
        assert smith_form(Matrix(CTX, [[1, 1], [0, U]])).invariants == (val(0, 0), val(0, 1))

    def test_factors_multiply_back(self):
        m = Matrix(CTX, [[T, U, 1], [U * U, 1 + T, T], [0, T * U, U]])
        sf = smith_form(m)
        assert sf.P @ sf.D @ sf.Q == m
        assert sf.D.is_diagonal()
        assert list(sf.invariants) == sorted(sf.invariants)

    def test_random_tie_breaking_gives_same_invariants(self):
        m = Matrix(CTX, [[1, U], [T, 1 + U]])
        expected = smith_form(m).invariants
        for seed in range(5):
            assert smith_form(m, rng=random.Random(seed)).invariants == expected

    def test_singular(self):
        with pytest.raises(RankError):
            smith_form(Matrix(CTX, [[1, U], [1, U]]))


def test_lattice_class_validation():
    with pytest.raises(RankError):
        lattice([[1, U], [T, T * U]])
    with pytest.raises(ShapeError):
        LatticeClass(Matrix(CTX, [[1]]), V)


def test_class_eq_examples():
    assert class_eq(I2, diag(T, T))
    assert not class_eq(I2, diag(1, T))
    assert class_eq(I2, lattice([[1, 0], [U, 1]]))
    assert I2 == diag(U, U)


def test_rel_position_examples():
    assert rel_position(I2, diag(1, T)) == (val(0, 0), val(1, 0))
    assert rel_position(diag(1, T), diag(1, T)) == (val(0, 0), val(0, 0))
    assert rel_position(I2, diag(U.inverse(), U)) == (val(0, 0), val(0, 2))


def test_distance_examples():
    assert dist_max(I2, diag(1, T)) == val(1, 0)
    assert dist_max(I2, I2) == val(0, 0)
    assert dist_max(I2, diag(U.inverse(), U)) == val(0, 2)
    assert dist_sum(I2, diag(1, T)) == val(1, 0)
    assert dist_sum(diag(1, 1, 1), diag(1, T, T * T)) == val(4, 0)
    assert dist_index(diag(1, 1, 1), diag(1, T, T * T)) == val(3, 0)


@pytest.mark.parametrize("n", [2, 3])
def test_distances_are_invariant_under_the_group(n):
    rng = random.Random(20 + n)
    for _ in range(6):
        a, b = random_class(CTX, n, rng), random_class(CTX, n, rng)
        g = random_sl(CTX, n, rng, max_factors=5)
        ga, gb = act(g, a), act(g, b)
        assert dist_max(ga, gb) == dist_max(a, b)
        assert dist_sum(ga, gb) == dist_sum(a, b)
        assert dist_index(ga, gb) == dist_index(a, b)


def test_adjacency():
    assert is_adjacent(I2, diag(1, U))
    assert not is_adjacent(I2, diag(1, T))
    assert not is_adjacent(I2, I2)


def test_dedupe_classes():
    classes = [I2, diag(T, T), diag(1, U), diag(U, U * U)]
    assert len(dedupe_classes(classes)) == 2


class TestCommonApartment:
    def test_same_class(self):
        common = common_apartment(I2, I2)
        assert common.x1 == common.x2 == ApartmentPoint.origin(2, 2)

    def test_already_diagonal(self):
        common = common_apartment(I2, diag(1, T))
        assert common.x2 == ApartmentPoint((val(0, 0), val(1, 0)))

    def test_basis_diagonalizes_both(self):
        l2 = lattice([[1, 1], [0, U]])
        common = common_apartment(I2, l2)
        assert common.x2.difference(common.x1) == (val(0, 0), val(0, 1))
        frame = Matrix.diag(CTX, [V.monomial(c) for c in common.x2.coords])
        assert class_eq(LatticeClass(common.basis @ frame, V), l2)
        assert class_eq(LatticeClass(common.basis, V), I2)


def test_psi_examples():
    assert psi(diag(T, 1)) == ApartmentPoint((val(0, 0), val(-1, 0)))
    assert psi(I2) == ApartmentPoint.origin(2, 2)
    x = ApartmentPoint((val(0, 0), val(2, -1)))
    assert class_eq(psi_inv(x, V), diag(1, T**2 / U))
    assert psi(psi_inv(x, V)) == x
    with pytest.raises(ShapeError):
        psi(lattice([[1, 1], [0, 1]]))


def test_act_examples():
    assert class_eq(act(Matrix.identity(CTX, 2), diag(1, T)), diag(1, T))
    assert class_eq(act(Matrix.diag(CTX, [T, T.inverse()]), I2), diag(T, T.inverse()))
    assert class_eq(act(Matrix(CTX, [[1, U], [0, 1]]), I2), I2)
    with pytest.raises(GroupMembershipError):
        act(Matrix.diag(CTX, [T, 1]), I2)
