import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _data import circle, graph, k4_graph, random_graph, theta_graph
from tropjac.errors import InvalidInput, NotConnected, UnsupportedGenus
from tropjac.metric_graph import (
    Edge, InfiniteEdge, WeightedMetricGraph, canonical_loopless_model, core, genus, isomorphism,
    minimal_skeleton, renumber, subdivide,
)


def test_genus_counts_weights_and_cycles():
    assert genus(k4_graph()) == 3
    assert genus(circle()) == 1
    assert genus(theta_graph()) == 2
    G = graph([(0, 1, 1)], {0: 2, 1: 1})
    assert genus(G) == 3 and G.first_betti() == 0


def test_validation():
    with pytest.raises(InvalidInput):
        WeightedMetricGraph({0: 0}, [Edge(0, 0, 1, F(1))])
    with pytest.raises(InvalidInput):
        WeightedMetricGraph({0: 0, 1: 0}, [Edge(0, 0, 1, F(0))])
    with pytest.raises(InvalidInput):
        WeightedMetricGraph({0: -1})
    with pytest.raises(InvalidInput):
        WeightedMetricGraph({0: 0, 1: 0}, [Edge(0, 0, 1, F(1)), Edge(0, 1, 0, F(2))])


def test_bridges():
    G = graph([(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 4), (3, 3, 1)])
    assert G.bridges() == [3]
    assert not graph([(0, 1, 1), (2, 3, 1)]).is_connected()


def test_json_round_trip():
    G = WeightedMetricGraph({0: 1, 1: 0}, [Edge(0, 0, 1, F(3, 2)), Edge(1, 1, 1, F(2))], [InfiniteEdge(1, "p")])
    H = WeightedMetricGraph.from_json(G.to_json())
    assert H == G and H.infinite_edges == G.infinite_edges
    assert G.to_json()["edges"][0]["length"] == "3/2"
    with pytest.raises(InvalidInput):
        WeightedMetricGraph.from_json({"vertices": [{"weight": 0}]})


def test_dot():
    dot = k4_graph().to_dot()
    assert dot.startswith("graph G {") and dot.count("--") == 6


class TestSkeleton:
    def test_leaves_and_subdivisions_vanish(self):
        # theta graph with a tail and one subdivided edge
        G = graph([(0, 1, 1), (0, 2, 2), (2, 1, 3), (0, 1, 5), (1, 3, 7), (3, 4, 1)])
        S = minimal_skeleton(G)
        assert isomorphism(S, theta_graph(1, 5, 5)) is not None

    def test_weighted_leaf_kept(self):
        G = graph([(0, 1, 1), (0, 1, 2), (1, 2, 3)], {2: 1})
        S = minimal_skeleton(G)
        # vertex 0 has valence 2, so the parallel pair becomes a loop of length 3
        assert len(S.vertices) == 2 and genus(S) == 2
        assert sorted((e.is_loop, e.length) for e in S.edges) == [(False, 3), (True, 3)]

    def test_rays_dropped(self):
        G = WeightedMetricGraph({0: 0, 1: 0}, [Edge(0, 0, 1, F(1)), Edge(1, 0, 1, F(1)), Edge(2, 0, 1, F(1))],
                                [InfiniteEdge(0, "a")])
        assert not minimal_skeleton(G).infinite_edges

    def test_genus_guard(self):
        with pytest.raises(UnsupportedGenus):
            minimal_skeleton(circle())
        assert len(core(graph([(0, 1, 2), (1, 0, 3), (1, 2, 5)])).edges) == 1

    def test_loopless_model(self):
        G = graph([(0, 0, 4), (0, 1, 1), (1, 1, 6)])
        M = canonical_loopless_model(G)
        assert not any(e.is_loop for e in M.edges)
        assert len(M.vertices) == 4 and genus(M) == 2
        assert sorted(e.length for e in M.edges) == [1, 2, 2, 3, 3]

    @given(st.integers(0, 10 ** 9))
    @settings(max_examples=100, deadline=None)
    def test_skeleton_invariants(self, seed):
        G = random_graph(random.Random(seed), weights=True)
        if genus(G) < 2:
            return
        S = minimal_skeleton(G)
        assert genus(S) == genus(G)
        for v in S.vertices:
            assert S.weight(v) > 0 or S.degree(v) >= 3
        assert isomorphism(minimal_skeleton(S), S) is not None


class TestRenumberAndIso:
    def test_renumber_is_isomorphic(self):
        G = k4_graph()
        R = renumber(G)
        assert R.vertices == [0, 1, 2, 3]
        assert isomorphism(G, R) is not None

    def test_lengths_matter(self):
        assert isomorphism(theta_graph(1, 2, 3), theta_graph(3, 1, 2)) is not None
        assert isomorphism(theta_graph(1, 2, 3), theta_graph(1, 2, 4)) is None
        assert isomorphism(theta_graph(1, 2, 3), theta_graph(1, 2, 4), with_lengths=False) is not None

    def test_subdivide(self):
        G = subdivide(k4_graph(), 2, F(1, 3))
        assert len(G.vertices) == 5 and genus(G) == 3
        assert isomorphism(minimal_skeleton(G), minimal_skeleton(k4_graph())) is not None
        with pytest.raises(InvalidInput):
            subdivide(k4_graph(), 2, 1)

    @given(st.integers(0, 10 ** 9))
    @settings(max_examples=60, deadline=None)
    def test_relabelled_graphs_isomorphic(self, seed):
        rng = random.Random(seed)
        G = random_graph(rng)
        perm = list(range(len(G.vertices)))
        rng.shuffle(perm)
        H = WeightedMetricGraph({perm[v]: G.weight(v) for v in G.vertices},
                                [Edge(e.id, perm[e.dst], perm[e.src], e.length) for e in G.edges])
        m = isomorphism(G, H)
        assert m is not None and all(G.weight(v) == H.weight(m[v]) for v in G.vertices)


def test_cycle_basis_needs_connected():
    from tropjac.period_matrix import cycle_basis
    with pytest.raises(NotConnected):
        cycle_basis(graph([(0, 1, 1), (2, 3, 1)]))
