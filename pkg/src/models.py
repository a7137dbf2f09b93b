import os
from typing import Dict, List, Optional, Tuple

import sympy
import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, field_validator

from .algebra.matrix import Matrix
from .algebra.ordered_values import format_lexval, parse_lexval
from .algebra.valued_field import FieldContext, Valuation
from .building.apartment import ApartmentPoint, HalfApartmentBound
from .building.groups import AffineWeylElem
from .building.lattice import LatticeClass
from .building.sl2_boundary import End
from .config import DEFAULTS_PATH, ENV_PREFIX
from .errors import ShapeError


class Config(BaseModel):
    """Run parameters, resolved from flags, HBK_* environment variables and data/defaults.yaml."""

    model_config = ConfigDict(from_attributes=True)

    p: int = 2
    d: int = 2
    n: int = 2
    seed: int = 7
    degree_bound: int = 64
    radius: int = 3
    window: int = 2
    # unset: each verify criterion runs its acceptance count
    samples: Optional[int] = None

    @field_validator("p")
    @classmethod
    def _prime(cls, value: int) -> int:
        if not sympy.isprime(value):
            raise ValueError(f"p must be prime, got {value}")
        return value

    @field_validator("d")
    @classmethod
    def _rank(cls, value: int) -> int:
        if not 1 <= value <= 3:
            raise ValueError(f"d must be between 1 and 3, got {value}")
        return value

    @field_validator("n")
    @classmethod
    def _size(cls, value: int) -> int:
        if not 2 <= value <= 4:
            raise ValueError(f"n must be between 2 and 4, got {value}")
        return value

    @field_validator("degree_bound", "samples")
    @classmethod
    def _positive(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            raise ValueError(f"must be positive, got {value}")
        return value

    @field_validator("radius", "window")
    @classmethod
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"must be non-negative, got {value}")
        return value

    @classmethod
    def load(cls, overrides: Optional[Dict[str, object]] = None) -> "Config":
        load_dotenv()
        raw = {}
        if DEFAULTS_PATH.exists():
            raw = yaml.safe_load(DEFAULTS_PATH.read_text(encoding="utf-8")) or {}
        for name in cls.model_fields:
            env_value = os.environ.get(f"{ENV_PREFIX}{name.upper()}")
            if env_value:
                raw[name] = env_value
        raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.model_validate(raw)

    def field_context(self) -> FieldContext:
        return FieldContext(self.p, self.d, self.degree_bound)


def matrix_to_json(m: Matrix) -> List[List[str]]:
    return [[str(x) for x in row] for row in m.rows]


def matrix_from_json(ctx: FieldContext, rows: List[List[str]]) -> Matrix:
    return Matrix(ctx, [[str(x) for x in row] for row in rows])


class LatticeClassModel(BaseModel):
    """A lattice class; `rank` is the field's d and `coarse` the valuation rank when it is truncated."""

    model_config = ConfigDict(from_attributes=True)

    n: int
    basis: List[List[str]]
    rank: Optional[int] = None
    coarse: Optional[int] = None

    @classmethod
    def from_lattice(cls, lattice: LatticeClass) -> "LatticeClassModel":
        return cls(
            n=lattice.n,
            basis=matrix_to_json(lattice.basis),
            rank=lattice.ctx.d,
            coarse=None if lattice.valuation.is_fine else lattice.valuation.rank,
        )

    def to_lattice(self, ctx: FieldContext) -> LatticeClass:
        if self.rank is not None and self.rank != ctx.d:
            ctx = FieldContext(ctx.p, self.rank, ctx.degree_bound)
        if len(self.basis) != self.n or any(len(row) != self.n for row in self.basis):
            raise ShapeError(f"basis is not {self.n}x{self.n}")
        valuation = ctx.valuation if self.coarse is None else Valuation(ctx, self.coarse)
        return LatticeClass(matrix_from_json(ctx, self.basis), valuation)


class ApartmentPointModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    coords: List[str]

    @classmethod
    def from_point(cls, x: ApartmentPoint) -> "ApartmentPointModel":
        return cls(coords=[format_lexval(c) for c in x.coords])

    def to_point(self) -> ApartmentPoint:
        return ApartmentPoint(tuple(parse_lexval(c) for c in self.coords))


class AffineWeylModel(BaseModel):
    """perm is 1-based: perm[j-1] is the image of coordinate j."""

    model_config = ConfigDict(from_attributes=True)

    perm: List[int]
    trans: List[str]

    @classmethod
    def from_weyl(cls, w: AffineWeylElem) -> "AffineWeylModel":
        return cls(perm=[j + 1 for j in w.perm], trans=[format_lexval(t) for t in w.trans])

    def to_weyl(self) -> AffineWeylElem:
        return AffineWeylElem(tuple(j - 1 for j in self.perm), tuple(parse_lexval(t) for t in self.trans))


class BoundModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    bounds: Dict[str, str]

    @classmethod
    def from_bound(cls, bound: HalfApartmentBound) -> "BoundModel":
        return cls(bounds={f"{i},{j}": format_lexval(lam) for (i, j), lam in bound.bounds})


class EndModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    b1: List[str]
    b2: List[str]

    @classmethod
    def from_end(cls, end: End) -> "EndModel":
        return cls(b1=[str(x) for x in end.b1], b2=[str(x) for x in end.b2])

    def to_end(self, ctx: FieldContext) -> End:
        return End(ctx, tuple(ctx.elem(x) for x in self.b1), tuple(ctx.elem(x) for x in self.b2))


class CommonApartmentModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    basis: List[List[str]]
    x1: ApartmentPointModel
    x2: ApartmentPointModel


class DecompositionModel(BaseModel):
    """Factors of an Iwasawa (u, m, k) or Bruhat (b1, m, b2) decomposition."""

    model_config = ConfigDict(from_attributes=True)

    mode: str
    factors: Dict[str, List[List[str]]]
    weyl: AffineWeylModel


class EdgeModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    source: List[List[str]]
    target: List[List[str]]


class EndAnnotationModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    end: EndModel
    plus_edge: EdgeModel
    minus_edge: EdgeModel


class TreeVertexModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    index: int
    depth: int
    basis: List[List[str]]
    invariants: List[str]
    ends: List[EndAnnotationModel] = []


class TreeModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    radius: int
    vertices: List[TreeVertexModel]
    edges: List[Tuple[int, int]]
    is_tree: bool


class CriterionResult(BaseModel):
    """Outcome of one acceptance criterion in `verify`."""

    model_config = ConfigDict(from_attributes=True)

    name: str
    passed: bool
    samples: int
    counterexample: Optional[str] = None
    seconds: Optional[float] = None
