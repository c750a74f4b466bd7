import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _data import graph, k4_graph, prism_graph, theta_graph
from tropjac.errors import NotConnected, NotStableGraph, NotTriangularWeight, TooManyEdges
from tropjac.metric_graph import WeightedMetricGraph, genus
from tropjac.realization import degree_for_weight, realization_blueprint


def two_cubics_two_lines():
    # C1 = 0, C2 = 1 carry weight 1; L1 = 2, L2 = 3 are lines
    return graph([(0, 1, 1), (1, 2, 1), (1, 2, 1), (1, 2, 1), (0, 3, 1), (1, 3, 1), (1, 3, 1)], {0: 1, 1: 1})


def check_accounting(G, bp):
    assert sum(p.edges for p in bp.pairs) == len(G.edges)
    assert sum(p.blowups for p in bp.pairs) + len(G.edges) == sum(p.budget for p in bp.pairs)
    assert bp.arithmetic_genus() == genus(G)


def test_degree_for_weight():
    assert [degree_for_weight(w) for w in (0, 1, 3, 6, 10)] == [1, 3, 4, 5, 6]
    assert degree_for_weight(2) is None and degree_for_weight(4) is None


def test_single_cubic():
    bp = realization_blueprint(WeightedMetricGraph({0: 1}))
    assert bp.degrees == {0: 3} and bp.total_blowups == 0


def test_two_cubics():
    G = graph([(0, 1, 1), (0, 1, 1)], {0: 1, 1: 1})
    bp = realization_blueprint(G)
    assert bp.degrees == {0: 3, 1: 3} and bp.total_blowups == 7
    check_accounting(G, bp)


def test_two_cubics_two_lines():
    G = two_cubics_two_lines()
    assert genus(G) == 6
    bp = realization_blueprint(G)
    assert [bp.degrees[v] for v in range(4)] == [3, 3, 1, 1]
    assert bp.total_blowups == 15
    assert {(p.v, p.w): p.blowups for p in bp.pairs}[(0, 1)] == 8
    check_accounting(G, bp)
    ambient = bp.to_json()["ambient"]
    # Segre: P^a x P^b sits in P^((a+1)(b+1)-1)
    assert ambient["embedding"] == "P^2 x P^1 in P^5 (Segre)"
    assert ambient["surface"] == "blow-up of P^2 at 15 points"


def test_trivalent_graphs_use_lines():
    for G in (k4_graph(), prism_graph()):
        bp = realization_blueprint(G)
        assert set(bp.degrees.values()) == {1}
        check_accounting(G, bp)


def test_weight_zero_escalates_to_conic():
    # three edges between two lines exceed one intersection point; two conics meet in four
    bp = realization_blueprint(theta_graph())
    assert bp.degrees == {0: 2, 1: 2} and bp.total_blowups == 1
    check_accounting(theta_graph(), bp)


def test_errors():
    with pytest.raises(NotStableGraph):
        realization_blueprint(graph([(0, 1, 1), (0, 1, 1)]))
    with pytest.raises(NotTriangularWeight):
        realization_blueprint(WeightedMetricGraph({0: 2}))
    with pytest.raises(TooManyEdges):
        realization_blueprint(graph([(0, 0, 1), (0, 1, 1), (0, 1, 1)], {1: 1}))
    with pytest.raises(TooManyEdges):
        realization_blueprint(graph([(0, 1, 1)] * 10, {0: 1, 1: 1}))
    with pytest.raises(NotConnected):
        realization_blueprint(WeightedMetricGraph({0: 1, 1: 1}))


@given(st.integers(0, 10 ** 9))
@settings(max_examples=60, deadline=None)
def test_random_stable_graphs(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    weights = {v: rng.choice([0, 0, 1, 3]) for v in range(n)}
    edges = [(rng.randrange(v), v, 1) for v in range(1, n)]
    edges += [tuple(sorted(rng.sample(range(n), 2))) + (1,) for _ in range(rng.randint(0, 6))]
    G = graph(edges, weights)
    try:
        bp = realization_blueprint(G)
    except (NotStableGraph, TooManyEdges):
        return
    for v, d in bp.degrees.items():
        assert comb(d - 1, 2) == G.weight(v)
    assert all(p.edges <= p.budget for p in bp.pairs)
    check_accounting(G, bp)
