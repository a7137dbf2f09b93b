import json
import random
import re
from typing import List, Optional

import click
from pydantic import ValidationError

from .algebra.matrix import Matrix
from .algebra.ordered_values import format_lexval, parse_lexval
from .algebra.valued_field import FieldContext, Valuation, coarse_residue, parse_elem
from .building.apartment import ApartmentPoint, enclosure
from .building.fundamental_domain import fundamental_domain_report, root_coordinate_maps
from .building.groups import Facet, bruhat, is_in_parahoric, iwasawa, parahoric_conjugate_test
from .building.lattice import LatticeClass, common_apartment, dist_index, dist_max, dist_sum, rel_position, reinterpret
from .building.projections import CoarseContext, coarsen, lift, residue_class, stabilizes_fiber
from .building.sl2_boundary import fiber_ball
from .errors import DegreeBoundExceeded, DomainError, ElementParseError, FieldDivisionError, UnsupportedShapeError
from .export import graph
from .models import (
    AffineWeylModel,
    ApartmentPointModel,
    BoundModel,
    CommonApartmentModel,
    Config,
    DecompositionModel,
    EndModel,
    LatticeClassModel,
    matrix_from_json,
    matrix_to_json,
)
from .verify import sampling
from .verify.suite import CRITERIA, run_suite

EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3

PARSE_ERRORS = (ElementParseError, ValidationError, json.JSONDecodeError)
DOMAIN_ERRORS = (DomainError, FieldDivisionError, DegreeBoundExceeded, UnsupportedShapeError)


class ExitCodeGroup(click.Group):
    """Maps usage and parse problems to exit 1 and domain errors to exit 2."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise
        except PARSE_ERRORS as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_USAGE)
        except DOMAIN_ERRORS as e:
            click.echo(f"{type(e).__name__}: {e}", err=True)
            ctx.exit(EXIT_DOMAIN)


@click.group(cls=ExitCodeGroup)
@click.option("--p", "p", type=int, default=None, help="Characteristic of the residue field (env HBK_P)")
@click.option("--d", "d", type=int, default=None, help="Rank of the value group Z^d (env HBK_D)")
@click.option("--n", "n", type=int, default=None, help="Matrix size for sampled elements (env HBK_N)")
@click.option("--seed", type=int, default=None, help="Base seed for sampling (env HBK_SEED)")
@click.option("--degree-bound", type=int, default=None, help="Largest degree allowed in a field element (env HBK_DEGREE_BOUND)")
@click.pass_context
def cli(ctx: click.Context, p, d, n, seed, degree_bound):
    """Compute in Λ-buildings of SL_n over F_p(u_1, ..., u_d)."""
    try:
        ctx.obj = Config.load({"p": p, "d": d, "n": n, "seed": seed, "degree_bound": degree_bound})
    except ValidationError as e:
        raise click.UsageError(str(e)) from e


@cli.group(cls=ExitCodeGroup)
def dev():
    """Exploration and debugging commands."""
    pass


def _echo_json(payload) -> None:
    if hasattr(payload, "model_dump_json"):
        click.echo(payload.model_dump_json(indent=2))
    else:
        click.echo(json.dumps(payload, indent=2))


_DIAG = re.compile(r"^\s*diag\((.*)\)\s*$")


def parse_matrix(ctx: FieldContext, text: str, n: int) -> Matrix:
    """A JSON list of rows, or the shorthands `I` and `diag(a, b, ...)`."""
    stripped = text.strip()
    if stripped == "I":
        return Matrix.identity(ctx, n)
    match = _DIAG.match(stripped)
    if match:
        return Matrix.diag(ctx, [part.strip() for part in match.group(1).split(",")])
    rows = json.loads(stripped)
    if isinstance(rows, dict):
        rows = rows["basis"]
    return matrix_from_json(ctx, rows)


def parse_lattice(cfg: Config, text: str, rank: Optional[int] = None) -> LatticeClass:
    """A LatticeClassModel JSON object, or a basis as accepted by parse_matrix.

    `rank` forces the valuation rank, so a bare matrix is read over a coarse valuation.
    """
    ctx = cfg.field_context()
    stripped = text.strip()
    if stripped.startswith("{"):
        lattice = LatticeClassModel.model_validate_json(stripped).to_lattice(ctx)
    else:
        basis = parse_matrix(ctx, stripped, cfg.n)
        lattice = LatticeClass(basis, ctx.valuation)
    if rank is not None and lattice.valuation.rank != rank:
        lattice = reinterpret(lattice, Valuation(lattice.ctx, rank))
    return lattice


def parse_point(text: str) -> ApartmentPoint:
    """A JSON list of values such as '["(0,0)", "(1,0)"]', or an ApartmentPointModel object."""
    data = json.loads(text)
    if isinstance(data, dict):
        return ApartmentPointModel.model_validate(data).to_point()
    return ApartmentPoint(tuple(parse_lexval(str(c)) for c in data))


@cli.command()
@click.option("--elem", "text", required=True, help="Field element, e.g. 't^2*u^-3'")
@click.option("--s", type=int, default=None, help="Return only the s coarsest coordinates")
@click.pass_obj
def val(cfg: Config, text: str, s: Optional[int]):
    """Print the valuation of an element."""
    ctx = cfg.field_context()
    f = parse_elem(ctx, text)
    valuation = ctx.valuation if s is None or s == ctx.d else ctx.coarse_valuation(s)
    click.echo(format_lexval(valuation(f)))


DISTANCES = {"max": dist_max, "sum": dist_sum, "index": dist_index}


@cli.command()
@click.option("--kind", type=click.Choice(list(DISTANCES)), default="max")
@click.option("--l1", required=True, help="First lattice class")
@click.option("--l2", required=True, help="Second lattice class")
@click.pass_obj
def dist(cfg: Config, kind: str, l1: str, l2: str):
    """Distance between two lattice classes."""
    click.echo(format_lexval(DISTANCES[kind](parse_lattice(cfg, l1), parse_lattice(cfg, l2))))


@cli.command()
@click.option("--l1", required=True)
@click.option("--l2", required=True)
@click.pass_obj
def relpos(cfg: Config, l1: str, l2: str):
    """Relative position (sorted invariants, minimum shifted to zero)."""
    _echo_json([format_lexval(v) for v in rel_position(parse_lattice(cfg, l1), parse_lattice(cfg, l2))])


@cli.command()
@click.option("--l1", required=True)
@click.option("--l2", required=True)
@click.pass_obj
def apartment(cfg: Config, l1: str, l2: str):
    """A common apartment of two classes and their coordinates in it."""
    common = common_apartment(parse_lattice(cfg, l1), parse_lattice(cfg, l2))
    _echo_json(
        CommonApartmentModel(
            basis=matrix_to_json(common.basis),
            x1=ApartmentPointModel.from_point(common.x1),
            x2=ApartmentPointModel.from_point(common.x2),
        )
    )


@cli.command("enclosure")
@click.option("--point", "points", multiple=True, required=True, help="Apartment point, e.g. '[\"(0,0)\", \"(1,0)\"]'")
def enclosure_cmd(points):
    """Half-apartment bounds enclosing the given points."""
    _echo_json(BoundModel.from_bound(enclosure(parse_point(x) for x in points)))


@cli.command()
@click.option("--matrix", "text", required=True, help="Element of SL_n as JSON rows")
@click.option("--mode", type=click.Choice(["iwasawa", "bruhat"]), default="iwasawa")
@click.option("--facet", type=click.Choice([f.value for f in Facet]), default=Facet.CHAMBER.value)
@click.pass_obj
def decompose(cfg: Config, text: str, mode: str, facet: str):
    """Iwasawa (u m k) or affine Bruhat (b1 m b2) decomposition."""
    rng = random.Random(cfg.seed)
    g = parse_matrix(cfg.field_context(), text, cfg.n)
    if mode == "iwasawa":
        dec = iwasawa(g, facet=facet, rng=rng if facet == Facet.VERTEX.value else None)
    else:
        dec = bruhat(g)
    _echo_json(
        DecompositionModel(
            mode=mode,
            factors={name: matrix_to_json(m) for name, m in dec._asdict().items()},
            weyl=AffineWeylModel.from_weyl(dec.weyl),
        )
    )


@cli.command()
@click.option("--matrix", "text", required=True)
@click.option("--point", default=None, help="Apartment point whose vertex is tested")
@click.option("--base", default=None, help="Coarse vertex whose fiber is tested")
@click.option("--s", type=int, default=1, show_default=True)
@click.pass_obj
def stabilizes(cfg: Config, text: str, point: Optional[str], base: Optional[str], s: int):
    """Whether g fixes a vertex of the standard apartment or maps a fiber to itself."""
    if (point is None) == (base is None):
        raise click.UsageError("pass exactly one of --point and --base")
    g = parse_matrix(cfg.field_context(), text, cfg.n)
    if point is not None:
        x = parse_point(point)
        _echo_json({"parahoric": is_in_parahoric(g, x), "conjugate_test": parahoric_conjugate_test(g, x)})
    else:
        cc = CoarseContext(cfg.field_context(), s)
        _echo_json({"stabilizes_fiber": stabilizes_fiber(g, parse_lattice(cfg, base, rank=s), cc)})


@cli.command()
@click.option("--lattice", "text", required=True)
@click.option("--s", type=int, default=1, show_default=True)
@click.pass_obj
def project(cfg: Config, text: str, s: int):
    """Coarse projection π_s of a class."""
    cc = CoarseContext(cfg.field_context(), s)
    _echo_json(LatticeClassModel.from_lattice(coarsen(parse_lattice(cfg, text), cc)))


@cli.command()
@click.option("--elem", "elem_text", default=None, help="Field element to reduce")
@click.option("--lattice", "text", default=None, help="Fine class in the fiber over --base")
@click.option("--base", default=None, help="Coarse vertex; defaults to the projection of --lattice")
@click.option("--s", type=int, default=1, show_default=True)
@click.pass_obj
def residue(cfg: Config, elem_text: Optional[str], text: Optional[str], base: Optional[str], s: int):
    """Residue of an element, or residue class of a fiber member."""
    if (elem_text is None) == (text is None):
        raise click.UsageError("pass exactly one of --elem and --lattice")
    ctx = cfg.field_context()
    if elem_text is not None:
        click.echo(str(coarse_residue(parse_elem(ctx, elem_text), s)))
        return
    cc = CoarseContext(ctx, s)
    fine = parse_lattice(cfg, text)
    coarse = parse_lattice(cfg, base, rank=s) if base else coarsen(fine, cc)
    _echo_json(LatticeClassModel.from_lattice(residue_class(fine, coarse, cc)))


@cli.command("lift")
@click.option("--residue", "residue_text", required=True, help="Class over the residue field")
@click.option("--base", required=True, help="Coarse vertex")
@click.option("--s", type=int, default=1, show_default=True)
@click.pass_obj
def lift_cmd(cfg: Config, residue_text: str, base: str, s: int):
    """Lift a residue class into the fiber over a coarse vertex."""
    cc = CoarseContext(cfg.field_context(), s)
    residue_cfg = cfg.model_copy(update={"d": cc.residue_ctx.d})
    r = parse_lattice(residue_cfg, residue_text)
    _echo_json(LatticeClassModel.from_lattice(lift(r, parse_lattice(cfg, base, rank=s), cc)))


@cli.command()
@click.option("--center", default="I", show_default=True, help="Center class of the ball")
@click.option("--radius", type=int, default=None, help="Ball radius (env HBK_RADIUS)")
@click.option("--format", "fmt", type=click.Choice(["dot", "json"]), default="dot")
@click.option("--ends", is_flag=True, help="Annotate JSON vertices with their ends and Υ-edges")
@click.pass_obj
def tree(cfg: Config, center: str, radius: Optional[int], fmt: str, ends: bool):
    """Ball in the fiber tree (SL_2 over a rank-2 field)."""
    radius = cfg.radius if radius is None else radius
    ball = fiber_ball(parse_lattice(cfg.model_copy(update={"n": 2}), center), radius)
    if fmt == "dot":
        click.echo(graph.to_dot(ball).source)
    else:
        _echo_json(graph.to_model(ball, radius, with_ends=ends))


@cli.command()
@click.option("--suite", "suite_names", default="all", show_default=True, help="'all' or comma-separated criterion names")
@click.option("--samples", type=int, default=None, help="Samples per criterion (env HBK_SAMPLES); default: acceptance counts")
@click.option("--verbose", is_flag=True, help="Print counterexamples verbatim")
@click.option("--timings", is_flag=True, help="Add a seconds column")
@click.pass_context
def verify(ctx: click.Context, suite_names: str, samples: Optional[int], verbose: bool, timings: bool):
    """Run the property checks and print a pass/fail table."""
    cfg: Config = ctx.obj
    if samples is not None:
        cfg = Config.model_validate({**cfg.model_dump(), "samples": samples})
    names = list(CRITERIA) if suite_names == "all" else [name.strip() for name in suite_names.split(",")]
    unknown = [name for name in names if name not in CRITERIA]
    if unknown:
        raise click.UsageError(f"unknown criteria {unknown}; choose from {list(CRITERIA)}")

    header = f"{'criterion':<24} {'status':>6} {'samples':>7}"
    click.echo(header + (f" {'seconds':>8}" if timings else ""))
    click.echo("-" * len(header))
    results = run_suite(cfg, names)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        line = f"{result.name:<24} {status:>6} {result.samples:>7}"
        click.echo(line + (f" {result.seconds:>8.3f}" if timings else ""))
        if verbose and result.counterexample:
            click.echo(f"  counterexample: {result.counterexample}", err=True)
    failed = [r.name for r in results if not r.passed]
    click.echo(f"\n{len(results) - len(failed)}/{len(results)} criteria passed (seed {cfg.seed})")
    if failed:
        ctx.exit(EXIT_VERIFY)


@dev.command("fundamental-domain")
@click.option("--window", type=int, default=None, help="Half-width of the grid (env HBK_WINDOW)")
@click.pass_obj
def fundamental_domain(cfg: Config, window: Optional[int]):
    """Orbit representatives of the affine Weyl group on the SL_2 root coordinate."""
    ctx = FieldContext(cfg.p, 2, cfg.degree_bound)
    report = fundamental_domain_report(ctx, window=cfg.window if window is None else window)

    def fmt(point) -> str:
        return f"({point[0]}, {point[1]})"

    click.echo("Generators acting on λ = α(x):")
    for name, m in root_coordinate_maps(ctx).items():
        sign = "" if m.sign == 1 else "-"
        click.echo(f"  {name}: λ -> {sign}λ + {fmt(m.shift)}")
    click.echo(f"Translation periods: {report.periods}")
    click.echo(f"{len(report.representatives)} orbits on {report.grid_size} grid points")
    for label, failures in (("[0,1]^2 ∪ (1,2)x(0,1]", report.union_failures), ("[0,2)x[0,1] minus [1,2]x{0}", report.difference_failures)):
        click.echo(f"\n{label}: {len(failures)} orbits not met exactly once")
        for failure in failures:
            members = ", ".join(fmt(p) for p in failure.members) or "none"
            click.echo(f"  orbit of {fmt(failure.representative)}: {members}")
    if report.disagreements:
        click.echo("\nPoints where the two descriptions disagree: " + ", ".join(fmt(p) for p in report.disagreements))


SAMPLE_KINDS = ["elem", "matrix", "class", "end"]


@dev.command()
@click.option("--kind", type=click.Choice(SAMPLE_KINDS), default="class")
@click.option("--count", type=int, default=1, show_default=True)
@click.pass_obj
def sample(cfg: Config, kind: str, count: int):
    """Print random elements for the configured seed, as accepted by the other commands."""
    rng = random.Random(cfg.seed)
    ctx = cfg.field_context()
    out: List[object] = []
    for _ in range(count):
        if kind == "elem":
            out.append(str(sampling.random_elem(ctx, rng)))
        elif kind == "matrix":
            out.append(matrix_to_json(sampling.random_sl(ctx, cfg.n, rng)))
        elif kind == "class":
            out.append(LatticeClassModel.from_lattice(sampling.random_class(ctx, cfg.n, rng)).model_dump())
        else:
            rank_two = FieldContext(cfg.p, 2, cfg.degree_bound)
            out.append(EndModel.from_end(sampling.random_end(rank_two, rng)).model_dump())
    _echo_json(out if count > 1 else out[0])


def main():
    cli()


if __name__ == "__main__":
    main()
