from src.algebra.valued_field import FieldContext
from src.building.lattice import LatticeClass
from src.building.sl2_boundary import fiber_ball
from src.export.graph import to_dot, to_model, vertex_label

CTX = FieldContext(p=2, d=2)
BALL = fiber_ball(LatticeClass.standard(CTX.valuation, 2), 1)


def test_vertex_labels_are_relative_positions():
    assert vertex_label(BALL, 0) == "(0,0) (0,0)"
    assert all(vertex_label(BALL, i) == "(0,0) (0,1)" for i in range(1, 4))


def test_dot_output():
    source = to_dot(BALL).source
    assert source.startswith("graph fiber {")
    assert source.count(" -- ") == 3
    assert "fontcolor=blue" in source


def test_json_model():
    model = to_model(BALL, 1)
    assert model.is_tree
    assert [v.depth for v in model.vertices] == [0, 1, 1, 1]
    assert model.edges == [(0, 1), (0, 2), (0, 3)]
    assert all(v.ends == [] for v in model.vertices)


def test_json_model_with_ends():
    model = to_model(BALL, 1, with_ends=True)
    assert all(len(v.ends) == 2 for v in model.vertices)
    assert model.vertices[0].ends[0].end.b1 == ["1", "0"]
