"""Ends, boundary points and fiber trees for SL_2 over a rank-2 field.

The fiber of the coarse projection over a vertex of the t-adic tree is the
u-adic tree of the residue field F_p(u). An end of that fiber tree is the
ray [𝕆 b1 + 𝕆 u^k b2], k >= 0; its two limits are mixed modules 𝕆 c1 + 𝒪 c2,
and gluing matches the limits of ends in adjacent fibers.
"""

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

from ..algebra.matrix import Matrix
from ..algebra.ordered_values import LexVal
from ..algebra.valued_field import FieldContext, FieldElem, Valuation
from ..errors import DomainError, UnsupportedShapeError
from .lattice import LatticeClass, class_eq, dist_max, is_adjacent
from .projections import CoarseContext, coarsen, lift, residue_class

Vector = Tuple[FieldElem, FieldElem]


def _require_rank_two(ctx: FieldContext, n: int = 2):
    if n != 2 or ctx.d != 2:
        raise UnsupportedShapeError()


def _columns(ctx: FieldContext, b1: Vector, b2: Vector) -> Matrix:
    return Matrix.from_columns(ctx, [b1, b2])


def _scaled(c: FieldElem, v: Vector) -> Vector:
    return (c * v[0], c * v[1])


@dataclass(frozen=True, eq=False)
class End:
    """The ray [𝕆 b1 + 𝕆 u^k b2], k >= 0, up to shift."""

    ctx: FieldContext
    b1: Vector
    b2: Vector

    def __post_init__(self):
        _require_rank_two(self.ctx)
        if not _columns(self.ctx, self.b1, self.b2).det():
            raise DomainError("degenerate basis for an end")

    @property
    def basis(self) -> Matrix:
        return _columns(self.ctx, self.b1, self.b2)

    def ray_vertex(self, k: int) -> LatticeClass:
        u = self.ctx.gen(1)
        return LatticeClass(_columns(self.ctx, self.b1, _scaled(u**k, self.b2)), self.ctx.valuation)


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """The mixed module 𝕆 c1 + 𝒪 c2, up to homothety."""

    ctx: FieldContext
    c1: Vector
    c2: Vector

    def __post_init__(self):
        _require_rank_two(self.ctx)
        if not _columns(self.ctx, self.c1, self.c2).det():
            raise DomainError("degenerate basis for a boundary point")

    @property
    def basis(self) -> Matrix:
        return _columns(self.ctx, self.c1, self.c2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoundaryPoint):
            return NotImplemented
        return boundary_eq(self, other)

    __hash__ = None


def _coarse(ctx: FieldContext) -> Valuation:
    return ctx.coarse_valuation(1)


def _preserves_mixed_module(h: Matrix) -> bool:
    """h maps 𝕆 e1 + 𝒪 e2 into itself."""
    fine = h.ctx.valuation
    coarse = _coarse(h.ctx)
    return fine.in_ring(h[0, 0]) and coarse.in_ideal(h[0, 1]) and coarse.in_ring(h[1, 0]) and coarse.in_ring(h[1, 1])


def boundary_eq(x: BoundaryPoint, y: BoundaryPoint) -> bool:
    """Equality of mixed-module classes.

    With C = B g, the classes agree iff some λ g lies in the stabilizer of
    𝕆 e1 + 𝒪 e2. Such a λ must make g11 a unit of 𝕆, which fixes λ up to a
    unit; then both g' and its inverse have to preserve the module.
    """
    if x.ctx != y.ctx:
        raise DomainError("boundary points over different fields")
    g = x.basis.inverse() @ y.basis
    if not g[0, 0]:
        return False
    fine = x.ctx.valuation
    g = g.scale(fine.monomial(-fine(g[0, 0])))
    return _preserves_mixed_module(g) and _preserves_mixed_module(g.inverse())


def lim(end: End, sign: str) -> BoundaryPoint:
    """lim+ is [𝒪 b1 + 𝕆 b2]; lim- is [𝕆 b1 + 𝒪 t b2]."""
    if sign == "+":
        return BoundaryPoint(end.ctx, end.b2, end.b1)
    if sign == "-":
        return BoundaryPoint(end.ctx, end.b1, _scaled(end.ctx.coarse_letter, end.b2))
    raise DomainError(f"limit sign must be '+' or '-', got {sign!r}")


def end_eq(e1: End, e2: End) -> bool:
    return boundary_eq(lim(e1, "+"), lim(e2, "+")) and boundary_eq(lim(e1, "-"), lim(e2, "-"))


def glue(end: End) -> End:
    """The end of the neighbouring fiber whose limits are those of `end`, swapped."""
    return End(end.ctx, _scaled(end.ctx.coarse_letter, end.b2), end.b1)


def end_base(end: End) -> LatticeClass:
    """The coarse vertex [𝒪 b1 + 𝒪 b2] whose fiber tree contains the end."""
    return LatticeClass(end.basis, _coarse(end.ctx))


def boundary_base(x: BoundaryPoint) -> LatticeClass:
    return LatticeClass(x.basis, _coarse(x.ctx))


class CoarseEdge(NamedTuple):
    """An oriented edge of the t-adic tree."""

    source: LatticeClass
    target: LatticeClass

    def same_edge(self, other: "CoarseEdge") -> bool:
        """Unoriented equality."""
        return (class_eq(self.source, other.source) and class_eq(self.target, other.target)) or (
            class_eq(self.source, other.target) and class_eq(self.target, other.source)
        )

    def is_edge(self) -> bool:
        return dist_max(self.source, self.target) == LexVal.of(1)


def upsilon_point(x: BoundaryPoint) -> CoarseEdge:
    """Υ: the boundary point 𝕆 c1 + 𝒪 c2 sits between [𝒪 c1 + 𝒪 c2] and [𝒪 t c1 + 𝒪 c2]."""
    coarse = _coarse(x.ctx)
    t = x.ctx.coarse_letter
    return CoarseEdge(
        LatticeClass(x.basis, coarse),
        LatticeClass(_columns(x.ctx, _scaled(t, x.c1), x.c2), coarse),
    )


def upsilon(end: End, sign: str) -> CoarseEdge:
    return upsilon_point(lim(end, sign))


def standard_vertex(ctx: FieldContext, k: int) -> LatticeClass:
    """P_k = [𝒪 e1 + 𝒪 t^k e2] on the standard coarse apartment."""
    t = ctx.coarse_letter
    return LatticeClass(Matrix.diag(ctx, [ctx.one, t**k]), _coarse(ctx))


class ApartmentBoundaryPoint(NamedTuple):
    """The boundary point at coordinate k going towards +inf or -inf."""

    k: int
    direction: str
    point: BoundaryPoint


def apartment_boundary_points(ctx: FieldContext, window: int = 2) -> List[ApartmentBoundaryPoint]:
    """(k, +inf) = [𝕆 t^k e2 + 𝒪 e1] and (k, -inf) = [𝕆 e1 + 𝒪 t^k e2] for |k| <= window + 1."""
    _require_rank_two(ctx)
    t = ctx.coarse_letter
    e1 = (ctx.one, ctx.zero)
    out = []
    for k in range(-window - 1, window + 2):
        tk_e2 = (ctx.zero, t**k)
        out.append(ApartmentBoundaryPoint(k, "+", BoundaryPoint(ctx, tk_e2, e1)))
        out.append(ApartmentBoundaryPoint(k, "-", BoundaryPoint(ctx, e1, tk_e2)))
    return out


def edge_preimages(ctx: FieldContext, k: int, window: int = 2) -> List[ApartmentBoundaryPoint]:
    """Apartment boundary points whose Υ-edge is ]k, k+1[."""
    edge = CoarseEdge(standard_vertex(ctx, k), standard_vertex(ctx, k + 1))
    return [bp for bp in apartment_boundary_points(ctx, window) if upsilon_point(bp.point).same_edge(edge)]


def fiber_neighbors(lattice: LatticeClass) -> List[LatticeClass]:
    """The p + 1 neighbours of a class inside its fiber tree.

    The class is read as its own coarse base, so its residue is the standard
    vertex of the F_p(u)-tree. That vertex has neighbours spanned by
    (u e1, e2) and by (e1 + c e2, u e2) for c in F_p; each is lifted back.
    """
    ctx = lattice.ctx
    _require_rank_two(ctx, lattice.n)
    cc = CoarseContext(ctx, 1)
    base = coarsen(lattice, cc)
    res = residue_class(lattice, base, cc)
    rctx = cc.residue_ctx
    u = rctx.gen(1)
    steps = [Matrix(rctx, [[u, 0], [0, 1]])] + [Matrix(rctx, [[1, 0], [c, u]]) for c in range(ctx.p)]
    return [lift(LatticeClass(res.basis @ step, cc.residue_valuation), base, cc) for step in steps]


@dataclass
class FiberBall:
    """A BFS ball in a fiber tree: vertices, their depth, and undirected edges by index."""

    vertices: List[LatticeClass]
    depth: List[int]
    edges: List[Tuple[int, int]]
    degrees: Dict[int, int]

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1

    def is_regular(self, valence: int) -> bool:
        return all(deg == valence for deg in self.degrees.values())

    def neighbours(self, i: int) -> List[int]:
        return sorted({b if a == i else a for a, b in self.edges if i in (a, b)})


def _index_of(vertices: List[LatticeClass], lattice: LatticeClass) -> Optional[int]:
    for i, v in enumerate(vertices):
        if class_eq(v, lattice):
            return i
    return None


def fiber_ball(center: LatticeClass, radius: int) -> FiberBall:
    """Breadth-first ball of the fiber tree through `center`.

    Vertices at the rim are expanded too: neighbours already in the ball are
    recorded as edges, so a cycle inside the ball shows up as an extra edge,
    and the others are kept aside, deduplicated, to complete the rim degree.
    A listed neighbour counts only when it lies at distance one step.
    Degrees are read off the recorded edges, never off the neighbour lists.
    """
    if radius < 0:
        raise DomainError("radius must be non-negative")
    vertices = [center]
    depth = [0]
    edges = set()
    beyond: Dict[int, List[LatticeClass]] = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for nb in fiber_neighbors(vertices[i]):
            if not is_adjacent(vertices[i], nb):
                continue
            j = _index_of(vertices, nb)
            if j is None:
                if depth[i] == radius:
                    outside = beyond.setdefault(i, [])
                    if _index_of(outside, nb) is None:
                        outside.append(nb)
                    continue
                vertices.append(nb)
                depth.append(depth[i] + 1)
                j = len(vertices) - 1
                queue.append(j)
            edges.add((min(i, j), max(i, j)))
    ball = FiberBall(vertices, depth, sorted(edges), {})
    ball.degrees = {i: len(ball.neighbours(i)) + len(beyond.get(i, [])) for i in range(len(vertices))}
    return ball


class EndAnnotation(NamedTuple):
    """The two ends through a vertex along its basis directions, with their Υ-edges."""

    end: End
    plus_edge: CoarseEdge
    minus_edge: CoarseEdge


def vertex_ends(lattice: LatticeClass) -> List[EndAnnotation]:
    ctx = lattice.ctx
    b1, b2 = lattice.basis.columns()
    out = []
    for first, second in ((b1, b2), (b2, b1)):
        end = End(ctx, first, second)
        out.append(EndAnnotation(end, upsilon(end, "+"), upsilon(end, "-")))
    return out
