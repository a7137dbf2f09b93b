# tests/test_cli.py
import json

import pytest
from click.testing import CliRunner

from src.algebra.matrix import Matrix
from src.algebra.valued_field import FieldContext
from src.building.lattice import LatticeClass, class_eq
from src.cli import cli
from src.models import LatticeClassModel
from src.verify import suite

CTX = FieldContext(p=2, d=2)


@pytest.fixture
def run(monkeypatch):
    for name in ("P", "D", "N", "SEED", "DEGREE_BOUND", "RADIUS", "WINDOW", "SAMPLES"):
        monkeypatch.delenv(f"HBK_{name}", raising=False)
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, list(args))

    return invoke


def test_val(run):
    result = run("val", "--elem", "t^2*u^-3")
    assert result.exit_code == 0
    assert result.output.strip() == "(2,-3)"
    assert run("val", "--elem", "t^2*u^-3", "--s", "1").output.strip() == "(2)"


def test_dist(run):
    assert run("dist", "--kind", "sum", "--l1", "I", "--l2", "diag(1,t)").output.strip() == "(1,0)"
    assert run("dist", "--l1", "I", "--l2", "diag(1/u,u)").output.strip() == "(0,2)"


def test_relpos(run):
    result = run("relpos", "--l1", "I", "--l2", "diag(1,t)")
    assert json.loads(result.output) == ["(0,0)", "(1,0)"]


def test_decompose(run):
    result = run("decompose", "--matrix", '[["1", "0"], ["1/t", "1"]]')
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["factors"]["u"] == [["1", "t"], ["0", "1"]]
    assert payload["weyl"]["perm"] == [2, 1]


def test_enclosure(run):
    result = run("enclosure", "--point", '["(0,0)", "(0,0)"]', "--point", '["(0,0)", "(1,0)"]')
    assert json.loads(result.output)["bounds"] == {"1,2": "(0,0)", "2,1": "(1,0)"}


def test_stabilizes(run):
    result = run("stabilizes", "--matrix", '[["1", "1/t"], ["0", "1"]]', "--point", '["(0,0)", "(1,0)"]')
    assert json.loads(result.output) == {"parahoric": True, "conjugate_test": True}
    assert run("stabilizes", "--matrix", "I").exit_code == 1


def test_project_residue_lift_round_trip(run):
    projected = run("project", "--lattice", "diag(1,u)")
    assert projected.exit_code == 0
    assert json.loads(projected.output)["coarse"] == 1
    residue = run("residue", "--lattice", "diag(1,u)")
    assert json.loads(residue.output)["rank"] == 1
    lifted = run("lift", "--residue", residue.output, "--base", projected.output)
    assert lifted.exit_code == 0
    back = LatticeClassModel.model_validate_json(lifted.output).to_lattice(CTX)
    assert class_eq(back, LatticeClass(Matrix.diag(CTX, [1, CTX.gen(1)]), CTX.valuation))


def test_residue_of_element(run):
    assert run("residue", "--elem", "u + t").output.strip() == "u"


def test_tree_dot(run):
    result = run("tree", "--radius", "1")
    assert result.exit_code == 0
    assert result.output.startswith("graph fiber {")
    assert result.output.count(" -- ") == 3


def test_tree_json(run):
    payload = json.loads(run("tree", "--radius", "1", "--format", "json").output)
    assert payload["is_tree"]
    assert len(payload["vertices"]) == 4


def test_bad_flags_exit_1(run):
    assert run("--p", "4", "val", "--elem", "t").exit_code == 1
    assert run("val").exit_code == 1
    assert run("dist", "--kind", "nope", "--l1", "I", "--l2", "I").exit_code == 1


def test_parse_errors_exit_1(run):
    assert run("val", "--elem", "t^^2").exit_code == 1
    assert run("dist", "--l1", "[[1, 0]", "--l2", "I").exit_code == 1


def test_domain_errors_exit_2(run):
    result = run("val", "--elem", "1/(t + t)")
    assert result.exit_code == 2
    assert "FieldDivisionError" in result.output
    assert run("dist", "--l1", "[[1, 1], [1, 1]]", "--l2", "I").exit_code == 2
    assert run("--d", "3", "tree", "--radius", "1").exit_code == 2


def test_verify_passes(run):
    result = run("--seed", "3", "verify", "--suite", "valuation-law,sl2-boundary", "--samples", "2", "--timings")
    assert result.exit_code == 0
    assert "seconds" in result.output
    assert "2/2 criteria passed (seed 3)" in result.output


def test_verify_failure_exits_3(run, monkeypatch):
    def broken(cfg, rng):
        yield "counterexample here"

    monkeypatch.setitem(suite.CRITERIA, "broken", broken)
    result = run("verify", "--suite", "broken", "--verbose")
    assert result.exit_code == 3
    assert "FAIL" in result.output
    assert "0/1 criteria passed" in result.output


def test_verify_unknown_criterion(run):
    assert run("verify", "--suite", "nope").exit_code == 1


def test_dev_fundamental_domain(run):
    result = run("dev", "fundamental-domain")
    assert result.exit_code == 0
    assert "Translation periods: (2, 2)" in result.output
    assert "10 orbits on 81 grid points" in result.output


def test_dev_sample_is_reproducible(run):
    first = run("--seed", "5", "dev", "sample", "--kind", "class", "--count", "2")
    second = run("--seed", "5", "dev", "sample", "--kind", "class", "--count", "2")
    assert first.exit_code == 0
    assert first.output == second.output
    assert len(json.loads(first.output)) == 2
