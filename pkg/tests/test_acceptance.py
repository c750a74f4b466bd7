"""End-to-end acceptance checks, one test per criterion, each against its time limit."""

import random
from fractions import Fraction as F
from itertools import permutations

from _data import (
    D4_GRAM, K4_FORM, K4_ORDER, K4_TREE, PRISM_LENGTHS, SMOOTH_QUARTIC, SCHOTTKY_Q, SCHOTTKY_Q_PRIME,
    SCHOTTKY_X, SIX_POINT_PLUCKER, SIX_POINTS, graph, k4_graph, prism_graph, quartic, random_form, random_graph,
    random_phylo_tree, random_unimodular, spanning_tree_sum, t_adic_quartic,
)
from tropjac.abel_jacobi import AbelJacobi, GraphPoint, frac_part
from tropjac.admissible_cover import hyperelliptic_pipeline_full
from tropjac.delaunay import ThetaFunction, delaunay_subdivision, lattice_points_in_ellipsoid, \
    secondary_cone_of_form, voronoi_cell
from tropjac.exact.cones import PolyhedralCone
from tropjac.exact.linalg import congruence, det, matmul, sym_to_vec, transpose
from tropjac.metric_graph import isomorphism
from tropjac.period_matrix import basis_change, cycle_basis, period_matrix, secondary_cone_of_graph
from tropjac.phylo import neighbor_joining, plucker_valuations, tree_metric
from tropjac.plane_tropical import faithfulness_certificate, newton_subdivision, plane_tropicalization, \
    tropical_curve
from tropjac.schottky import cone_equivalent, graph_catalog, schottky_recover, validate_witness

CASES = 100


def quad(Q, v):
    return sum(Q[i][j] * v[i] * v[j] for i in range(len(v)) for j in range(len(v)))


def test_1_k4_period_matrix(criterion):
    criterion.start("1 K4 period matrix", 1)
    G = k4_graph()
    given = cycle_basis(G, tree=K4_TREE, orientation="stored", edge_order=K4_ORDER)
    assert [G.edge(e).length for e in K4_ORDER] == [13, 7, 11, 2, 5, 3]
    assert period_matrix(G, given).matrix == K4_FORM
    own = cycle_basis(G)
    U = basis_change(given, own)
    assert abs(det(U)) == 1
    assert matmul(matmul(transpose(U), K4_FORM), U) == period_matrix(G, own).matrix
    criterion.stop()


def permutohedron_graph():
    P = list(permutations(range(4)))
    idx = {p: i for i, p in enumerate(P)}
    edges = set()
    for p in P:
        for v in range(3):
            q = tuple(v + 1 if x == v else v if x == v + 1 else x for x in p)
            edges.add(tuple(sorted((idx[p], idx[q]))))
    return graph([(a, b, 1) for a, b in sorted(edges)])


def test_2_k4_theta_divisor(criterion):
    criterion.start("2 K4 Delaunay and Voronoi", 30)
    D = delaunay_subdivision(K4_FORM)
    assert len(D.cells) == 6
    assert all(len(c) == 4 and (0, 0, 0) in c and (1, 1, 1) in c for c in D.cells)
    V = voronoi_cell(K4_FORM)
    assert V.divisor_counts == (6, 12, 7)
    assert V.f_vector == (24, 36, 14) and V.is_simple()
    assert V.facet_sizes() == {6: 8, 4: 6}
    skeleton = graph([(a, b, 1) for a, b in (sorted(e) for e in V.faces[1])])
    assert isomorphism(skeleton, permutohedron_graph(), with_lengths=False) is not None
    criterion.stop()


def test_3_schottky_recovery(criterion):
    criterion.start("3 Schottky recovery of the prism", 60)
    graph_catalog.cache_clear()
    r = schottky_recover(SCHOTTKY_Q, graph_catalog(4))
    assert r.in_locus
    assert isomorphism(r.graph, prism_graph(), with_lengths=False) is not None
    assert isomorphism(r.graph, prism_graph()) is not None
    assert sorted(r.lengths.values()) == PRISM_LENGTHS
    image = congruence(SCHOTTKY_Q, r.U)
    assert secondary_cone_of_graph(r.entry.graph).contains(sym_to_vec(image))
    assert period_matrix(r.graph).matrix == image
    assert congruence(SCHOTTKY_Q, SCHOTTKY_X) == SCHOTTKY_Q_PRIME
    assert validate_witness(SCHOTTKY_X, secondary_cone_of_form(SCHOTTKY_Q), secondary_cone_of_form(SCHOTTKY_Q_PRIME))
    criterion.stop()


def test_4_genus_two_classes(criterion):
    criterion.start("4 genus-2 secondary cone classes", 10)
    graph_catalog.cache_clear()
    reps = [e.cone for e in graph_catalog(2)]
    sym = lambda m: sym_to_vec(m)  # noqa: E731
    displays = [
        PolyhedralCone(3, generators=[sym([[1, 0], [0, 0]]), sym([[0, 0], [0, 1]]), sym([[1, -1], [-1, 1]])]),
        PolyhedralCone(3, generators=[sym([[1, 0], [0, 0]]), sym([[0, 0], [0, 1]])]),
        PolyhedralCone(3, generators=[sym([[1, 0], [0, 0]])]),
        PolyhedralCone(3, equations=[[int(i == j) for j in range(3)] for i in range(3)]),
    ]
    assert len(reps) == 4
    hits = [[i for i, c in enumerate(reps) if cone_equivalent(c, target) is not None] for target in displays]
    assert all(len(h) == 1 for h in hits)
    assert sorted(h[0] for h in hits) == [0, 1, 2, 3]
    criterion.stop()


def test_5_hyperelliptic(criterion):
    criterion.start("5 hyperelliptic pipeline", 1)
    res = hyperelliptic_pipeline_full(SIX_POINTS)
    assert plucker_valuations(SIX_POINTS) == SIX_POINT_PLUCKER
    G = res.graph
    assert len(G.vertices) == 5 and len(G.edges) == 6
    assert G.total_weight == 0 and G.first_betti() == 2
    assert len({e.length for e in G.edges}) == 1
    criterion.stop()


def test_6_faithfulness(criterion):
    criterion.start("6 faithfulness certificate", 5)
    res = plane_tropicalization(quartic(SMOOTH_QUARTIC))
    cert = res.certificate
    assert cert.certified and cert.first_betti == 3
    assert all(res.curve.valence(v) == 3 for v in range(len(res.curve.vertices)))
    assert all(e.multiplicity == 1 for e in res.curve.edges)
    bad = faithfulness_certificate(tropical_curve(newton_subdivision(t_adic_quartic())))
    assert not bad.certified
    assert any(k == "non_unimodular_cell" for k, _ in bad.violations)
    criterion.stop()


def _theta_case(rng):
    g = rng.randint(1, 3)
    Q = random_form(rng, g, bound=12)
    T = ThetaFunction(Q)
    x = [F(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(g)]
    lam = [rng.randint(-2, 2) for _ in range(g)]
    v0, _ = T(x)
    v1, _ = T([a + b for a, b in zip(x, lam)])
    shift = sum(lam[i] * Q[i][j] * x[j] for i in range(g) for j in range(g)) + F(quad(Q, lam), 2)
    return v1 == v0 + shift


def _cauchy_binet_case(rng):
    G = random_graph(rng, max_edges=8)
    return det(period_matrix(G).matrix) == spanning_tree_sum(G)


def _empty_ellipsoid_case(rng):
    Q = random_form(rng, rng.choice([2, 3]), bound=20)
    D = delaunay_subdivision(Q)
    for i, cell in enumerate(D.cells):
        c = D.circumcenter(i)
        r2 = quad(Q, [a - b for a, b in zip(cell[0], c)])
        if sorted(lattice_points_in_ellipsoid(Q, c, r2)) != sorted(cell):
            return False
    return True


def _abel_jacobi_case(rng):
    while True:
        G = random_graph(rng, max_edges=7)
        if G.first_betti():
            break
    pick = lambda: GraphPoint(rng.choice(G.edges).id, F(rng.randint(0, 12), 12))  # noqa: E731
    aj = AbelJacobi(G, None, pick())
    p, q = pick(), pick()
    via = frac_part([a + b for a, b in zip(aj.point(q), aj.point(p, q))])
    if aj.point(p) != via:
        return False
    for i, row in enumerate(aj.basis.B):
        chain = {e: F(c) for e, c in zip(aj.basis.edge_ids, row) if c}
        if frac_part(aj.lift(chain)) != tuple([F(0)] * aj.g):
            return False
    return True


def _nj_case(rng):
    T = random_phylo_tree(rng, rng.randint(4, 10))
    return neighbor_joining(T.metric()).same_tree(T)


def _plucker_nj_case(rng):
    T = random_phylo_tree(rng, rng.randint(4, 8))
    D = T.metric()
    n = T.n
    vals = [-D[i][j] / 2 for i in range(n) for j in range(i + 1, n)]
    return neighbor_joining(tree_metric(vals, n)).same_tree(T)


def _schottky_case(rng, entries):
    entry = rng.choice(entries)
    G = entry.graph.with_lengths({e.id: F(rng.randint(1, 30), rng.randint(1, 3)) for e in entry.graph.edges})
    Q = congruence(period_matrix(G).matrix, random_unimodular(rng, entry.h))
    r = schottky_recover(Q, graph_catalog(entry.h))
    return r.in_locus and period_matrix(r.graph).matrix == congruence(Q, r.U)


def test_7_property_suites(criterion):
    criterion.start("7 property suites (100 cases each)", 600)
    entries = [e for g in (1, 2, 3) for e in graph_catalog(g) if e.h == g]
    suites = {
        "theta quasi-periodicity": _theta_case,
        "Cauchy-Binet": _cauchy_binet_case,
        "empty ellipsoid": _empty_ellipsoid_case,
        "Abel-Jacobi": _abel_jacobi_case,
        "neighbor joining": _nj_case,
        "tree metric round trip": _plucker_nj_case,
        "Schottky round trip": lambda rng: _schottky_case(rng, entries),
    }
    failures = {}
    for name, case in suites.items():
        rng = random.Random(name)
        bad = [k for k in range(CASES) if not case(rng)]
        if bad:
            failures[name] = bad
    assert not failures, failures
    # every catalog class of genus at most 3 was exercised
    assert len(entries) == 1 + 2 + 5
    criterion.stop()


def test_8_d4_not_in_locus(criterion):
    criterion.start("8 D4 outside the Schottky locus", 300)
    graph_catalog.cache_clear()
    catalog = graph_catalog(4)
    r = schottky_recover(D4_GRAM, catalog)
    assert not r.in_locus
    assert r.scanned == sum(1 for e in catalog if e.h == 4)
    criterion.stop()
