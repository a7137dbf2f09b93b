"""Property checks run by `lambda-buildings verify`.

Each criterion draws its own samples from random.Random(seed + index) and
reports the first counterexample it finds, so a failure replays exactly
from the printed seed.
"""

import random
import time
from typing import Callable, Dict, Iterable, List, Optional

from ..algebra.ordered_values import LexVal, lex_min
from ..algebra.valued_field import FieldContext, val
from ..building.apartment import ApartmentPoint, apartment_distance
from ..building.groups import bruhat, is_in_iwahori, is_in_parahoric, iwasawa, nu_action, retract_to_apartment
from ..building.lattice import LatticeClass, act, class_eq, dist_max, dist_sum, psi, psi_inv
from ..building.projections import CoarseContext, coarsen, in_fiber, kernel_element, lift, residue_class
from ..building.sl2_boundary import boundary_eq, edge_preimages, end_base, fiber_ball, glue, lim, upsilon
from ..models import Config, CriterionResult
from .sampling import (
    random_class,
    random_elem,
    random_end,
    random_fiber_member,
    random_iwahori,
    random_monomial_sl,
    random_point,
    random_sl,
    random_sl_integral,
    random_sl_outside,
    random_upper_unipotent,
)

Check = Callable[[Config, random.Random], Iterable[Optional[str]]]


def _rank_two(cfg: Config) -> FieldContext:
    return FieldContext(cfg.p, 2, cfg.degree_bound)


def _with_fiber(cfg: Config) -> FieldContext:
    return cfg.field_context() if cfg.d >= 2 else _rank_two(cfg)


def check_valuation_law(cfg: Config, rng: random.Random):
    ctx = _rank_two(cfg)
    t, u = ctx.gen(2), ctx.gen(1)
    for a in range(-3, 4):
        for b in range(-3, 4):
            got = val(t**a * u**b)
            yield None if got == LexVal.of(a, b) else f"val(t^{a}*u^{b}) = {got}"
    ctx = cfg.field_context()
    for _ in range(cfg.samples):
        f, g = random_elem(ctx, rng), random_elem(ctx, rng)
        if val(f * g) != val(f) + val(g):
            yield f"val({f} * {g}) = {val(f * g)} != {val(f)} + {val(g)}"
        elif f + g and val(f + g) < lex_min([val(f), val(g)]):
            yield f"val({f} + {g}) = {val(f + g)} below min({val(f)}, {val(g)})"
        else:
            yield None


def check_stabilizer(cfg: Config, rng: random.Random):
    ctx = cfg.field_context()
    n = max(cfg.n, 3)
    origin = LatticeClass.standard(ctx.valuation, n)
    for _ in range(cfg.samples):
        k = random_sl_integral(ctx, n, rng)
        if not class_eq(act(k, origin), origin):
            yield f"integral element moves the origin: {k}"
            continue
        g = random_sl_outside(ctx, n, rng)
        yield f"non-integral element fixes the origin: {g}" if class_eq(act(g, origin), origin) else None


def check_metric_axioms(cfg: Config, rng: random.Random):
    ctx = cfg.field_context()
    for index in range(cfg.samples):
        n = 2 + index % 2
        a, b, c = (random_class(ctx, n, rng) for _ in range(3))
        problem = None
        for name, dist in (("dist_max", dist_max), ("dist_sum", dist_sum)):
            if dist(a, b) != dist(b, a):
                problem = f"{name} not symmetric on {a}, {b}"
            elif dist(a, c) > dist(a, b) + dist(b, c):
                problem = f"{name} triangle fails on {a}, {b}, {c}"
            elif not dist(a, a).is_zero or dist(a, b).is_zero != class_eq(a, b):
                problem = f"{name} zero set differs from class equality on {a}, {b}"
            if problem:
                break
        yield problem


def _secondary(cfg: Config) -> int:
    return max(1, cfg.samples // 2)


def check_projection(cfg: Config, rng: random.Random):
    ctx = _with_fiber(cfg)
    cc = CoarseContext(ctx, 1)
    secondary = _secondary(cfg)
    for index in range(cfg.samples):
        fine = random_class(ctx, cfg.n, rng)
        g = random_sl(ctx, cfg.n, rng, max_factors=4)
        base = coarsen(fine, cc)
        if not class_eq(coarsen(act(g, fine), cc), act(g, base)):
            yield f"coarsen is not equivariant for g = {g} on {fine}"
            continue
        if index >= secondary:
            yield None
            continue
        member = random_fiber_member(base, cc, rng)
        if not in_fiber(member, base, cc):
            yield f"{member} is not over {base}"
            continue
        res = residue_class(member, base, cc)
        back = lift(res, base, cc)
        if not class_eq(back, member):
            yield f"lift(residue_class(L)) != L for {member}"
        elif not class_eq(residue_class(back, base, cc), res):
            yield f"residue_class(lift(R)) != R for {res}"
        else:
            h = kernel_element(rng, base, cc)
            yield None if class_eq(act(h, member), member) else f"kernel element {h} moves fiber member {member}"


def check_iwasawa(cfg: Config, rng: random.Random, cosets: int = 5):
    """ν(m) is read off g and off u g k for random u in U and k in the right-hand subgroup."""
    ctx = cfg.field_context()
    n = cfg.n
    origin = ApartmentPoint.origin(n, ctx.d)
    for _ in range(cfg.samples):
        g = random_sl(ctx, n, rng)
        dec = iwasawa(g)
        if dec.u @ dec.m @ dec.k != g:
            yield f"u m k != g for {g}"
            continue
        if not (dec.u.is_upper_unitriangular() and dec.m.is_monomial() and is_in_iwahori(dec.k)):
            yield f"chamber factors fail membership for {g}"
            continue
        moved = [random_upper_unipotent(ctx, n, rng) @ g @ random_iwahori(ctx, n, rng) for _ in range(cosets)]
        if any(iwasawa(h, rng=rng).weyl != dec.weyl for h in moved):
            yield f"chamber Weyl element changes across U g B for {g}"
            continue
        vertex = iwasawa(g, facet="vertex", rng=rng)
        if vertex.u @ vertex.m @ vertex.k != g:
            yield f"vertex factors do not multiply back for {g}"
        elif not (vertex.m.is_diagonal() and is_in_parahoric(vertex.k, origin)):
            yield f"vertex factors fail membership for {g}"
        else:
            moved = [random_upper_unipotent(ctx, n, rng) @ g @ random_sl_integral(ctx, n, rng) for _ in range(cosets)]
            same = all(iwasawa(h, facet="vertex", rng=rng).weyl == vertex.weyl for h in moved)
            yield None if same else f"vertex translation changes across U g K for {g}"


def check_bruhat(cfg: Config, rng: random.Random, cosets: int = 5):
    """ν(m) is read off g and off b g b' for random Iwahori b, b'."""
    ctx = cfg.field_context()
    n = cfg.n
    for _ in range(cfg.samples):
        g = random_sl(ctx, n, rng)
        dec = bruhat(g)
        if dec.b1 @ dec.m @ dec.b2 != g:
            yield f"b1 m b2 != g for {g}"
        elif not (is_in_iwahori(dec.b1) and dec.m.is_monomial() and is_in_iwahori(dec.b2)):
            yield f"Bruhat factors fail membership for {g}"
        else:
            moved = [random_iwahori(ctx, n, rng) @ g @ random_iwahori(ctx, n, rng) for _ in range(cosets)]
            same = all(bruhat(h, rng=rng).weyl == dec.weyl for h in moved)
            yield None if same else f"Bruhat Weyl element changes across B g B for {g}"


def check_apartment(cfg: Config, rng: random.Random):
    ctx = cfg.field_context()
    valuation = ctx.valuation
    secondary = _secondary(cfg)
    for index in range(cfg.samples):
        x, y = random_point(cfg.n, ctx.d, rng), random_point(cfg.n, ctx.d, rng)
        lhs = dist_sum(psi_inv(x, valuation), psi_inv(y, valuation))
        if lhs != apartment_distance(x, y):
            yield f"dist_sum {lhs} != apartment distance {apartment_distance(x, y)} for {x}, {y}"
            continue
        if index >= secondary:
            yield None
            continue
        m = random_monomial_sl(ctx, cfg.n, rng)
        moved = psi(act(m, psi_inv(x, valuation)))
        yield None if moved == nu_action(m)(x) else f"psi(m.x) = {moved} != nu(m)(x) = {nu_action(m)(x)} for m = {m}"


def check_boundary(cfg: Config, rng: random.Random):
    ctx = _rank_two(cfg)
    for k in range(-2, 3):
        found = edge_preimages(ctx, k, window=max(cfg.window, 2))
        yield None if len(found) == 2 else f"edge ]{k},{k + 1}[ has {len(found)} boundary preimages"
    for _ in range(cfg.samples):
        end = random_end(ctx, rng)
        glued = glue(end)
        edge = upsilon(end, "-")
        if boundary_eq(lim(end, "+"), lim(end, "-")):
            yield f"limits coincide for end {end.basis}"
        elif not (boundary_eq(lim(glued, "+"), lim(end, "-")) and boundary_eq(lim(glued, "-"), lim(end, "+"))):
            yield f"glued end does not swap limits for {end.basis}"
        elif not (edge.is_edge() and class_eq(end_base(glued), edge.source) and class_eq(end_base(end), edge.target)):
            yield f"glued end lands outside the neighbouring fiber for {end.basis}"
        else:
            yield None


def check_fiber_tree(cfg: Config, rng: random.Random):
    ctx = _rank_two(cfg)
    cc = CoarseContext(ctx, 1)
    center = LatticeClass.standard(ctx.valuation, 2)
    ball = fiber_ball(center, cfg.radius)
    yield None if ball.is_tree() else f"ball of radius {cfg.radius} has {len(ball.edges)} edges on {len(ball.vertices)} vertices"
    yield None if ball.is_regular(ctx.p + 1) else f"degrees {sorted(set(ball.degrees.values()))} != {ctx.p + 1}"
    base = coarsen(center, cc)
    for v in ball.vertices:
        yield None if in_fiber(v, base, cc) else f"{v} left the fiber"


def check_retraction(cfg: Config, rng: random.Random):
    ctx = cfg.field_context()
    for _ in range(cfg.samples):
        a, b = random_class(ctx, cfg.n, rng), random_class(ctx, cfg.n, rng)
        for sign in ("+", "-"):
            ra, rb = retract_to_apartment(a, sign), retract_to_apartment(b, sign)
            if apartment_distance(ra, rb) > dist_sum(a, b):
                yield f"retraction ({sign}) expands {a}, {b}: {apartment_distance(ra, rb)} > {dist_sum(a, b)}"
                break
        else:
            yield None


CRITERIA: Dict[str, Check] = {
    "valuation-law": check_valuation_law,
    "stabilizer": check_stabilizer,
    "metric-axioms": check_metric_axioms,
    "projection-fibers": check_projection,
    "iwasawa": check_iwasawa,
    "bruhat": check_bruhat,
    "apartment-isometry": check_apartment,
    "sl2-boundary": check_boundary,
    "fiber-regularity": check_fiber_tree,
    "retraction": check_retraction,
}


DEFAULT_SAMPLES = 200

# samples per criterion when the config leaves `samples` unset
ACCEPTANCE_SAMPLES: Dict[str, int] = {
    "valuation-law": 500,
    "stabilizer": 200,
    "metric-axioms": 500,
    "projection-fibers": 200,
    "iwasawa": 200,
    "bruhat": 200,
    "apartment-isometry": 200,
    "sl2-boundary": 50,
    "fiber-regularity": 1,
    "retraction": 200,
}


def run_criterion(name: str, cfg: Config) -> CriterionResult:
    index = list(CRITERIA).index(name)
    cfg = cfg.model_copy(update={"samples": cfg.samples or ACCEPTANCE_SAMPLES.get(name, DEFAULT_SAMPLES)})
    rng = random.Random(cfg.seed + index)
    start = time.perf_counter()
    samples = 0
    counterexample = None
    for outcome in CRITERIA[name](cfg, rng):
        samples += 1
        if outcome is not None:
            counterexample = outcome
            break
    return CriterionResult(
        name=name,
        passed=counterexample is None,
        samples=samples,
        counterexample=counterexample,
        seconds=round(time.perf_counter() - start, 3),
    )


def run_suite(cfg: Config, names: Optional[List[str]] = None) -> List[CriterionResult]:
    return [run_criterion(name, cfg) for name in (names or list(CRITERIA))]
