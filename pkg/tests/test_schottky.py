import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _data import (
    D4_GRAM, K4_FORM, PRISM_CYCLES, PRISM_LENGTHS, SCHOTTKY_Q, SCHOTTKY_Q_PRIME, SCHOTTKY_X, k4_graph,
    prism_graph, random_unimodular,
)
from tropjac.delaunay import secondary_cone_of_form, voronoi_cell
from tropjac.exact.cones import PolyhedralCone
from tropjac.exact.linalg import congruence, det, sym_to_vec
from tropjac.metric_graph import isomorphism
from tropjac.period_matrix import period_matrix, secondary_cone_of_graph
from tropjac.schottky import (
    cone_equivalent, find_equivalence, graph_catalog, schottky_recover, transform_ray, validate_witness,
)


def test_catalog_counts():
    assert [len(graph_catalog(g).entries) for g in (1, 2, 3, 4)] == [2, 4, 9, 25]
    assert [e.h for e in graph_catalog(3)].count(3) == 5


def test_genus_two_classes():
    sym = lambda *rows: sym_to_vec([list(r) for r in rows])
    d1 = PolyhedralCone(3, generators=[sym((1, 0), (0, 0)), sym((0, 0), (0, 1)), sym((1, -1), (-1, 1))])
    d2 = PolyhedralCone(3, generators=[sym((1, 0), (0, 0)), sym((0, 0), (0, 1))])
    d3 = PolyhedralCone(3, generators=[sym((1, 0), (0, 0))])
    reps = [e.cone for e in graph_catalog(2)]
    assert len(reps) == 4
    for target in (d1, d2, d3):
        assert sum(cone_equivalent(c, target) is not None for c in reps) == 1
    assert sum(1 for e in graph_catalog(2) if e.dimension == 0) == 1


def test_find_equivalence_parallel_vectors():
    w = find_equivalence([(-1,), (1,)], [(1,), (1,)])
    assert w is not None and abs(w.U[0][0]) == 1
    assert find_equivalence([(1, 0), (0, 1)], [(1, 0), (1, 2)]) is None


class TestRecovery:
    def test_k4(self):
        r = schottky_recover(K4_FORM, graph_catalog(3))
        assert r.in_locus
        assert isomorphism(r.graph, k4_graph()) is not None
        assert period_matrix(r.graph).matrix == congruence(K4_FORM, r.U)

    def test_prism(self):
        r = schottky_recover(SCHOTTKY_Q, graph_catalog(4))
        assert r.in_locus
        assert isomorphism(r.graph, prism_graph()) is not None
        assert sorted(r.lengths.values()) == PRISM_LENGTHS
        assert r.graph.to_json()["edges"] and r.entry.dimension == 9
        assert abs(det(r.U)) == 1
        target = secondary_cone_of_graph(r.entry.graph)
        assert target.contains(sym_to_vec(congruence(SCHOTTKY_Q, r.U)))

    def test_displayed_witness_accepted(self):
        assert congruence(SCHOTTKY_Q, SCHOTTKY_X) == SCHOTTKY_Q_PRIME
        src = secondary_cone_of_form(SCHOTTKY_Q)
        dst = secondary_cone_of_form(SCHOTTKY_Q_PRIME)
        assert validate_witness(SCHOTTKY_X, src, dst)
        bad = [row[:] for row in SCHOTTKY_X]
        bad[0][0] += 1
        assert not validate_witness(bad, src, dst)

    def test_prism_cycles(self):
        G = prism_graph()
        D = [e.length for e in G.edges]
        Q = [[sum(a[k] * b[k] * D[k] for k in range(9)) for b in PRISM_CYCLES] for a in PRISM_CYCLES]
        assert Q == SCHOTTKY_Q_PRIME

    def test_d4_rejected(self):
        r = schottky_recover(D4_GRAM, graph_catalog(4))
        assert not r.in_locus
        assert r.scanned == sum(1 for e in graph_catalog(4) if e.h == 4)
        assert r.to_json()["in_schottky_locus"] is False

    def test_degenerate_form(self):
        r = schottky_recover([[3, 0], [0, 0]])
        assert r.in_locus and r.graph.total_weight == 1
        assert period_matrix(r.graph).matrix == congruence([[3, 0], [0, 0]], r.U)

    def test_zero_form(self):
        r = schottky_recover([[0, 0], [0, 0]])
        assert r.in_locus and r.graph.total_weight == 2 and not r.graph.edges

    def test_json(self):
        out = schottky_recover(K4_FORM).to_json(witness=True)
        assert out["in_schottky_locus"] and "U" in out["witness"]


def test_transform_ray_matches_congruence():
    U = [[1, 1], [0, 1]]
    ray = sym_to_vec([[1, 0], [0, 0]])
    assert transform_ray(U, ray) == tuple(sym_to_vec(congruence([[1, 0], [0, 0]], U)))


def catalog_entries(max_g=3):
    seen = set()
    out = []
    for g in range(1, max_g + 1):
        for e in graph_catalog(g):
            key = (e.h, e.vectors)
            if e.h and key not in seen:
                seen.add(key)
                out.append(e)
    return out


ENTRIES = catalog_entries()


@given(st.integers(0, 10 ** 9), st.integers(0, len(ENTRIES) - 1))
@settings(max_examples=120, deadline=None)
def test_round_trip(seed, idx):
    rng = random.Random(seed)
    entry = ENTRIES[idx]
    G = entry.graph.with_lengths({e.id: F(rng.randint(1, 30), rng.randint(1, 3)) for e in entry.graph.edges})
    V = random_unimodular(rng, entry.h)
    Q = congruence(period_matrix(G).matrix, V)
    r = schottky_recover(Q, graph_catalog(entry.h))
    assert r.in_locus
    assert period_matrix(r.graph).matrix == congruence(Q, r.U)
    assert r.entry.dimension == entry.dimension
    assert sum(e.length for e in r.graph.edges) == sum(e.length for e in G.edges)


@pytest.mark.slow
def test_d4_voronoi_is_24_cell():
    V = voronoi_cell(D4_GRAM)
    assert V.f_vector == (24, 96, 96, 24)


def test_zero_cone_entry_lives_in_ambient_space():
    graph_catalog.cache_clear()
    zero = [e for e in graph_catalog(3) if e.h == 0]
    assert len(zero) == 1
    assert zero[0].cone.dim == 6 and zero[0].cone.rays() == []
