import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _data import DYADIC_QUARTIC, SMOOTH_QUARTIC, graph, quartic, t_adic_quartic
from tropjac.errors import DegenerateNewtonPolygon, InvalidInput, NotCertifiedError, UnsupportedGenus
from tropjac.exact.numbers import PAdic
from tropjac.metric_graph import genus, isomorphism
from tropjac.plane_tropical import (
    PlaneCurveInput, convex_polygon, faithfulness_certificate, interior_point_count, lattice_length,
    newton_subdivision, plane_tropicalization, skeleton, to_svg, tropical_curve, twice_area,
)


def affine(heights, p=2):
    """Curve sum p^h x^i y^j over a dict {(i, j): h}."""
    return PlaneCurveInput(tuple(((i, j), F(p) ** h) for (i, j), h in sorted(heights.items())), PAdic(p))


def triangle(d):
    return [(i, j) for i in range(d + 1) for j in range(d + 1 - i)]


def curve_of(f):
    return tropical_curve(newton_subdivision(f))


class TestPolygons:
    def test_helpers(self):
        sq = convex_polygon([(0, 0), (2, 0), (1, 1), (2, 2), (0, 2), (1, 0)])
        assert sq == ((0, 0), (2, 0), (2, 2), (0, 2))
        assert twice_area(sq) == 8 and interior_point_count(sq) == 1
        assert lattice_length((0, 0), (4, 6)) == 2
        assert interior_point_count(convex_polygon(triangle(4))) == 3

    def test_degenerate(self):
        with pytest.raises(DegenerateNewtonPolygon):
            newton_subdivision(affine({(0, 0): 0, (1, 1): 0, (2, 2): 1}))


class TestInput:
    def test_validation(self):
        with pytest.raises(InvalidInput):
            PlaneCurveInput((((0, 0), F(1)), ((1, 0), F(1))), PAdic(2))
        with pytest.raises(InvalidInput):
            PlaneCurveInput((((0, 0, 2), F(1)), ((1, 0, 1), F(1)), ((1, 1, 1), F(1))), PAdic(2), True)
        with pytest.raises(InvalidInput):
            PlaneCurveInput((((0, 0), F(1)), ((1, 0), F(1)), ((1, 0), F(3))), PAdic(2))

    def test_json_round_trip(self):
        for f in (quartic(DYADIC_QUARTIC), t_adic_quartic()):
            assert PlaneCurveInput.from_json(f.to_json()) == f

    def test_zero_coefficient_dropped(self):
        f = affine({(0, 0): 0, (1, 0): 0, (0, 1): 0})
        g = PlaneCurveInput(f.terms + (((1, 1), F(0)),), PAdic(2))
        assert g.lifted() == f.lifted()

    def test_explicit_valuation(self):
        assert t_adic_quartic().lifted()[(1, 0)] == 1

    def test_singular_needs_genus(self):
        C = curve_of(t_adic_quartic())
        with pytest.raises(InvalidInput):
            faithfulness_certificate(C, smooth=False)
        assert faithfulness_certificate(C, g=1, smooth=False).genus == 1


class TestExamples:
    def test_tropical_line(self):
        C = curve_of(affine({(0, 0): 0, (1, 0): 0, (0, 1): 0}))
        assert C.vertices == ((0, 0),) and not C.edges
        assert sorted(r.direction for r in C.rays) == [(-1, -1), (0, 1), (1, 0)]
        assert C.is_balanced()

    def test_honeycomb_cubic(self):
        f = affine({(i, j): i * i + i * j + j * j for i, j in triangle(3)})
        res = plane_tropicalization(f)
        assert res.certificate.certified and res.certificate.fast_path
        assert len(res.subdivision.cells) == 9 and res.curve.first_betti() == 1
        S = res.skeleton
        assert genus(S) == 1 and len(S.edges) == 1 and S.edges[0].is_loop

    def test_dyadic_quartic_is_trivial(self):
        S = newton_subdivision(quartic(DYADIC_QUARTIC))
        assert len(S.cells) == 1 and set(S.cells[0].vertices) == {(0, 0), (4, 0), (0, 4)}
        cert = faithfulness_certificate(tropical_curve(S))
        assert not cert.certified
        assert {k for k, _ in cert.violations} == {"non_unimodular_cell", "first_betti", "edge_multiplicity"}

    def test_smooth_quartic(self):
        res = plane_tropicalization(quartic(SMOOTH_QUARTIC))
        assert len(res.subdivision.cells) == 9 and res.subdivision.is_unimodular()
        assert res.certificate.certified and res.certificate.first_betti == 3
        want = graph([(0, 1, 6), (0, 1, 3), (0, 2, 1), (1, 3, 1), (2, 2, 3), (3, 3, 3)])
        assert isomorphism(res.skeleton, want) is not None

    def test_t_adic_not_certified(self):
        f = t_adic_quartic()
        C = curve_of(f)
        cert = faithfulness_certificate(C)
        assert not cert.certified and not cert
        kinds = {k for k, _ in cert.violations}
        assert "non_unimodular_cell" in kinds and "first_betti" in kinds
        with pytest.raises(NotCertifiedError):
            skeleton(C, cert)
        assert plane_tropicalization(f).skeleton is None

    def test_genus_zero_skeleton(self):
        C = curve_of(affine({(0, 0): 0, (1, 0): 0, (0, 1): 0}))
        with pytest.raises(UnsupportedGenus):
            skeleton(C, faithfulness_certificate(C, g=0))

    def test_svg(self):
        svg = to_svg(curve_of(quartic(SMOOTH_QUARTIC)))
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
        assert svg.count("<line") >= 11


def random_curve(seed, d=None):
    rng = random.Random(seed)
    d = d or rng.randint(1, 4)
    pts = triangle(d)
    heights = {p: rng.randint(0, 12) for p in pts if rng.random() < 0.85}
    for corner in ((0, 0), (d, 0), (0, d)):
        heights.setdefault(corner, rng.randint(0, 12))
    return affine(heights)


@given(st.integers(0, 10 ** 9))
@settings(max_examples=150, deadline=None)
def test_balancing_and_boundary(seed):
    f = random_curve(seed)
    S = newton_subdivision(f)
    C = tropical_curve(S)
    assert C.is_balanced()
    # rays dual to a boundary side carry total multiplicity equal to its lattice length
    poly = S.polygon
    for a, b in zip(poly, poly[1:] + poly[:1]):
        on_side = [r for r in C.rays
                   if all((q[0] - a[0]) * (b[1] - a[1]) == (q[1] - a[1]) * (b[0] - a[0]) for q in r.dual)]
        assert sum(r.multiplicity for r in on_side) == lattice_length(a, b)
    assert C.first_betti() == len(C.edges) - len(C.vertices) + 1
    # bounded regions of the complement match interior points used by the subdivision
    used = {q for c in S.cells for q in c.vertices}
    assert C.first_betti() == sum(1 for q in used if _strictly_inside(poly, q))


def _strictly_inside(poly, q):
    return all((b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0]) > 0
               for a, b in zip(poly, poly[1:] + poly[:1]))


@given(st.integers(0, 10 ** 9))
@settings(max_examples=150, deadline=None)
def test_certified_skeleton_genus(seed):
    f = random_curve(seed, d=random.Random(seed).randint(3, 4))
    res = plane_tropicalization(f)
    if not res.certificate.certified:
        assert res.certificate.violations
        return
    g = interior_point_count(res.subdivision.polygon)
    assert res.curve.first_betti() == g
    if g:
        assert genus(res.skeleton) == g
        assert all(e.length > 0 for e in res.skeleton.edges)
