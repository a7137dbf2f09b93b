"""DOT and JSON renderings of a fiber-tree ball."""

from graphviz import Graph

from ..algebra.ordered_values import format_lexval
from ..building.lattice import rel_position
from ..building.sl2_boundary import CoarseEdge, FiberBall, vertex_ends
from ..models import EdgeModel, EndAnnotationModel, EndModel, TreeModel, TreeVertexModel, matrix_to_json


def vertex_label(ball: FiberBall, index: int) -> str:
    """Relative position to the center, e.g. "(0,0) (0,2)"."""
    return " ".join(format_lexval(v) for v in rel_position(ball.vertices[0], ball.vertices[index]))


def to_dot(ball: FiberBall, name: str = "fiber") -> Graph:
    dot = Graph(
        name=name,
        graph_attr={"rankdir": "TB"},
        node_attr={"shape": "plaintext", "fontsize": "12"},
    )
    for i in range(len(ball.vertices)):
        attrs = {"fontcolor": "blue"} if i == 0 else {}
        dot.node(f"v{i}", vertex_label(ball, i), **attrs)
    for i, j in ball.edges:
        dot.edge(f"v{i}", f"v{j}")
    return dot


def _edge_model(edge: CoarseEdge) -> EdgeModel:
    return EdgeModel(source=matrix_to_json(edge.source.basis), target=matrix_to_json(edge.target.basis))


def to_model(ball: FiberBall, radius: int, with_ends: bool = False) -> TreeModel:
    vertices = []
    for i, v in enumerate(ball.vertices):
        ends = []
        if with_ends:
            ends = [
                EndAnnotationModel(end=EndModel.from_end(a.end), plus_edge=_edge_model(a.plus_edge), minus_edge=_edge_model(a.minus_edge))
                for a in vertex_ends(v)
            ]
        vertices.append(
            TreeVertexModel(
                index=i,
                depth=ball.depth[i],
                basis=matrix_to_json(v.basis),
                invariants=[format_lexval(x) for x in rel_position(ball.vertices[0], v)],
                ends=ends,
            )
        )
    return TreeModel(radius=radius, vertices=vertices, edges=ball.edges, is_tree=ball.is_tree())
