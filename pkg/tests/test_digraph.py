import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridpaths.digraph import (
    Digraph,
    EmbeddedDigraph,
    GridVertex,
    HConnector,
    NotConnectedError,
    Terminal,
    TreeNode,
    VConnector,
    is_dotted_edge,
    label_from_json,
    label_name,
    label_to_json,
)
from gridpaths.gridtiling import generate_planted
from gridpaths.reduction import build_g1, level_set, reduce, reduce_degree

from ._oracles import random_dag


def unit_square():
    coords = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
    return EmbeddedDigraph([0, 1, 2, 3], [(0, 1), (1, 2), (2, 3), (3, 0)], coords)


def k5():
    coords = {
        i: (
            Fraction(round(1000 * math.cos(2 * math.pi * i / 5))),
            Fraction(round(1000 * math.sin(2 * math.pi * i / 5))),
        )
        for i in range(5)
    }
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    return EmbeddedDigraph(list(range(5)), edges, coords)


class TestConstruction:
    def test_duplicate_vertex_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            Digraph(["a", "a"], [])

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            Digraph(["a"], [("a", "a")])

    def test_parallel_edge_rejected(self):
        with pytest.raises(ValueError, match="parallel"):
            Digraph(["a", "b"], [("a", "b"), ("a", "b")])

    def test_missing_endpoint_rejected(self):
        with pytest.raises(ValueError, match="missing"):
            Digraph(["a"], [("a", "b")])

    def test_missing_coordinate_rejected(self):
        with pytest.raises(ValueError, match="coordinate"):
            EmbeddedDigraph(["a", "b"], [], {"a": (0, 0)})

    def test_coincident_coordinates_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            EmbeddedDigraph(["a", "b"], [], {"a": (0, 0), "b": (0, 0)})

    def test_extra_coordinates_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            EmbeddedDigraph(["a"], [], {"a": (0, 0), "b": (1, 1)})


class TestTopologicalSort:
    def test_single_edge(self):
        g = Digraph(["u", "v"], [("u", "v")])
        order, cycle = g.topological_sort()
        assert cycle is None
        assert order == ["u", "v"]

    def test_two_cycle_yields_witness(self):
        g = Digraph(["u", "v"], [("u", "v"), ("v", "u")])
        order, cycle = g.topological_sort()
        assert order is None
        assert sorted(cycle) == ["u", "v"]
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            assert g.has_edge(a, b)

    def test_constructed_gadget_is_acyclic(self):
        g = build_g1(2, 2)
        order, cycle = g.topological_sort()
        assert cycle is None
        position = {v: n for n, v in enumerate(order)}
        assert all(position[u] < position[v] for u, v in g.edges)

    def test_longer_cycle_witness_is_closed(self):
        g = Digraph(
            ["a", "b", "c", "d"],
            [("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")],
        )
        _, cycle = g.topological_sort()
        assert cycle is not None
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            assert g.has_edge(a, b)


class TestNeighborhoods:
    def test_all_vertices_has_no_outside_neighbors(self):
        g = build_g1(1, 2)
        assert g.out_neighbors(g.vertices) == set()
        assert g.in_neighbors(g.vertices) == set()

    def test_single_edge(self):
        g = Digraph(["u", "v"], [("u", "v")])
        assert g.out_neighbors({"u"}) == {"v"}
        assert g.in_neighbors({"u"}) == set()

    def test_unknown_vertex_rejected(self):
        g = Digraph(["u"], [])
        with pytest.raises(ValueError):
            g.out_neighbors({"x"})

    def test_vertical_level_out_neighbors_are_h_connectors(self):
        out = reduce(generate_planted(2, 2, noise=0, seed=0))
        vertical = level_set(out.graph, "vertical", 1)
        expected = {
            v for v in out.graph.vertices if isinstance(v, HConnector) and v.i == 1
        }
        assert out.graph.out_neighbors(vertical) == expected

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_neighbor_sets_are_disjoint_from_input(self, seed):
        g, _ = random_dag(seed)
        subset = [v for n, v in enumerate(g.vertices) if n % 2 == 0]
        assert g.out_neighbors(subset).isdisjoint(subset)
        assert g.in_neighbors(subset).isdisjoint(subset)


class TestDegrees:
    def test_empty_graph(self):
        g = Digraph([], [])
        assert g.max_in_degree() == 0
        assert g.max_out_degree() == 0

    def test_terminal_fans_dominate_degree(self):
        g = build_g1(2, 3)
        assert g.max_out_degree() == 3
        assert g.max_in_degree() == 3

    def test_degree_reduction_caps_at_two(self):
        out = reduce_degree(reduce(generate_planted(2, 3, noise=0, seed=0)))
        assert out.graph.max_in_degree() <= 2
        assert out.graph.max_out_degree() <= 2


class TestEmbedding:
    def test_square_has_two_faces_genus_zero(self):
        check = unit_square().check_planar_embedding()
        assert check.faces == 2
        assert check.genus == 0

    def test_k5_has_positive_genus(self):
        assert k5().check_planar_embedding().genus >= 1

    def test_reduction_output_is_planar(self):
        out = reduce(generate_planted(2, 3, noise=0, seed=0))
        assert out.graph.check_planar_embedding().genus == 0

    def test_single_vertex_is_a_sphere(self):
        g = EmbeddedDigraph(["a"], [], {"a": (0, 0)})
        check = g.check_planar_embedding()
        assert (check.faces, check.genus) == (1, 0)

    def test_empty_graph_raises(self):
        with pytest.raises(NotConnectedError):
            EmbeddedDigraph([], [], {}).check_planar_embedding()

    def test_disconnected_graph_raises(self):
        g = EmbeddedDigraph(
            ["a", "b", "c", "d"],
            [("a", "b"), ("c", "d")],
            {"a": (0, 0), "b": (1, 0), "c": (0, 1), "d": (1, 1)},
        )
        with pytest.raises(NotConnectedError):
            g.check_planar_embedding()

    def test_antiparallel_edges_rejected(self):
        g = EmbeddedDigraph(
            ["a", "b"], [("a", "b"), ("b", "a")], {"a": (0, 0), "b": (1, 0)}
        )
        with pytest.raises(ValueError, match="antiparallel"):
            g.check_planar_embedding()

    def test_collinear_directions_rejected(self):
        g = EmbeddedDigraph(
            ["a", "b", "c"],
            [("a", "b"), ("a", "c"), ("b", "c")],
            {"a": (0, 0), "b": (1, 0), "c": (2, 0)},
        )
        with pytest.raises(ValueError, match="collinear"):
            g.check_planar_embedding()


class TestRotation:
    def test_counterclockwise_order_from_positive_x(self):
        g = EmbeddedDigraph(
            ["o", "e", "n", "w", "s"],
            [("o", "e"), ("o", "n"), ("w", "o"), ("s", "o")],
            {"o": (0, 0), "e": (1, 0), "n": (0, 1), "w": (-1, 0), "s": (0, -1)},
        )
        assert g.rotation("o") == ("e", "n", "w", "s")

    def test_rederiving_rotation_is_idempotent(self):
        out = reduce(generate_planted(2, 2, noise=0, seed=1))
        g = out.graph
        first = {v: g.rotation(v) for v in g.vertices}
        rebuilt = EmbeddedDigraph(g.vertices, g.edges, dict(g.coords))
        assert {v: rebuilt.rotation(v) for v in rebuilt.vertices} == first


class TestSerialization:
    def test_label_json_round_trip(self):
        labels = [
            GridVertex(1, 2, 3, 4),
            GridVertex(1, 2, 3, 4, "lb"),
            HConnector(1, 2, 3),
            VConnector(2, 1, 3),
            Terminal("a", 2),
            TreeNode("c", 1, (0, 1, 1)),
        ]
        for label in labels:
            assert label_from_json(label_to_json(label)) == label

    def test_label_names_are_distinct(self):
        out = reduce_degree(reduce(generate_planted(2, 3, noise=1, seed=3)))
        names = [label_name(v) for v in out.graph.vertices]
        assert len(set(names)) == len(names)

    def test_graph_json_round_trip(self):
        g = reduce(generate_planted(2, 2, noise=1, seed=5)).graph
        again = EmbeddedDigraph.from_json_dict(g.to_json_dict())
        assert again == g

    def test_dot_export_is_deterministic_and_styled(self):
        out = reduce(generate_planted(1, 2, noise=0, seed=0))
        dot = out.graph.to_dot()
        assert dot == out.graph.to_dot()
        assert 'pos="' in dot
        assert "style=dotted" in dot
        assert dot.startswith("digraph")

    def test_dotted_edge_predicate(self):
        lb = GridVertex(1, 1, 2, 2, "lb")
        tr = GridVertex(1, 1, 2, 2, "tr")
        assert is_dotted_edge(lb, tr)
        assert not is_dotted_edge(tr, lb)
        assert not is_dotted_edge(lb, GridVertex(1, 1, 2, 3, "tr"))
