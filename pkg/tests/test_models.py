# tests/test_models.py
import pytest
from pydantic import ValidationError

from src.algebra.matrix import Matrix
from src.algebra.ordered_values import LexVal
from src.algebra.valued_field import FieldContext
from src.building.apartment import ApartmentPoint, enclosure
from src.building.groups import reflection
from src.building.lattice import LatticeClass, class_eq
from src.building.sl2_boundary import End, end_eq
from src.errors import ShapeError
from src.models import (
    AffineWeylModel,
    ApartmentPointModel,
    BoundModel,
    Config,
    EndModel,
    LatticeClassModel,
    matrix_from_json,
    matrix_to_json,
)

CTX = FieldContext(p=2, d=2)
U = CTX.gen(1)
T = CTX.gen(2)


class TestConfig:
    def test_defaults(self):
        cfg = Config()
        assert (cfg.p, cfg.d, cfg.n, cfg.seed, cfg.samples) == (2, 2, 2, 7, None)
        assert cfg.field_context() == FieldContext(2, 2, 64)

    @pytest.mark.parametrize("field, value", [("p", 4), ("p", 1), ("d", 0), ("d", 4), ("n", 1), ("n", 5), ("samples", 0), ("radius", -1)])
    def test_rejects_out_of_range(self, field, value):
        with pytest.raises(ValidationError):
            Config(**{field: value})

    def test_load_reads_defaults_file(self, monkeypatch):
        for name in Config.model_fields:
            monkeypatch.delenv(f"HBK_{name.upper()}", raising=False)
        assert Config.load() == Config()

    def test_environment_overrides_defaults(self, monkeypatch):
        monkeypatch.setenv("HBK_P", "3")
        monkeypatch.setenv("HBK_SEED", "11")
        cfg = Config.load()
        assert cfg.p == 3
        assert cfg.seed == 11

    def test_flags_override_environment(self, monkeypatch):
        monkeypatch.setenv("HBK_P", "3")
        cfg = Config.load({"p": 5, "d": None})
        assert cfg.p == 5
        assert cfg.d == 2

    def test_bad_environment_value(self, monkeypatch):
        monkeypatch.setenv("HBK_P", "6")
        with pytest.raises(ValidationError):
            Config.load()


def test_matrix_json_uses_canonical_text():
    m = Matrix(CTX, [[1, T], [U.inverse(), 0]])
    rows = matrix_to_json(m)
    assert rows == [["1", "t"], ["1/u", "0"]]
    assert matrix_from_json(CTX, rows) == m


class TestLatticeClassModel:
    def test_json_round_trip(self):
        lattice = LatticeClass(Matrix(CTX, [[T, U], [0, 1 + U]]), CTX.valuation)
        model = LatticeClassModel.model_validate_json(LatticeClassModel.from_lattice(lattice).model_dump_json())
        assert model.coarse is None
        assert class_eq(model.to_lattice(CTX), lattice)

    def test_coarse_class_keeps_its_valuation(self):
        lattice = LatticeClass(Matrix.diag(CTX, [1, T]), CTX.coarse_valuation(1))
        model = LatticeClassModel.from_lattice(lattice)
        assert model.coarse == 1
        assert model.to_lattice(CTX).valuation == CTX.coarse_valuation(1)

    def test_rank_in_payload_wins(self):
        model = LatticeClassModel(n=2, basis=[["1", "0"], ["0", "u3"]], rank=3)
        assert model.to_lattice(CTX).ctx.d == 3

    def test_wrong_shape(self):
        with pytest.raises(ShapeError):
            LatticeClassModel(n=2, basis=[["1", "0", "0"], ["0", "1", "0"]]).to_lattice(CTX)


def test_apartment_point_model():
    x = ApartmentPoint((LexVal.of(0, 0), LexVal.of(2, -1)))
    model = ApartmentPointModel.from_point(x)
    assert model.coords == ["(0,0)", "(2,-1)"]
    assert model.to_point() == x


def test_affine_weyl_model_is_one_based():
    w = reflection(2, 1, 2, LexVal.of(1, 0))
    model = AffineWeylModel.from_weyl(w)
    assert model.perm == [2, 1]
    assert model.trans == ["(0,0)", "(-2,0)"]
    assert model.to_weyl() == w


def test_bound_model_keys():
    model = BoundModel.from_bound(enclosure([ApartmentPoint.origin(2, 2)]))
    assert model.bounds == {"1,2": "(0,0)", "2,1": "(0,0)"}


def test_end_model_round_trip():
    end = End(CTX, (CTX.one, T), (U, CTX.one))
    back = EndModel.model_validate(EndModel.from_end(end).model_dump()).to_end(CTX)
    assert end_eq(back, end)
    assert EndModel.from_end(end).b1 == ["1", "t"]
