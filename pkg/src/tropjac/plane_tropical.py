"""Embedded tropicalization of plane curves.

Terms are lifted by the valuations of their coefficients; the lower hull
projects to a regular subdivision of the Newton polygon, and the tropical
curve (min convention) is its dual.  A curve whose vertices are trivalent,
whose edges have multiplicity one and whose first Betti number equals the
genus of the input is certified faithful, and its skeleton is then the
abstract tropicalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import DegenerateNewtonPolygon, InvalidInput, NotCertifiedError, UnsupportedGenus
from .exact.hull import affine_rank, lower_hull
from .exact.linalg import primitive
from .exact.numbers import (INF, Explicit, Valuation, fmt_rational, to_rational, valuation_from_json,
                            valuation_to_json)
from .metric_graph import Edge, WeightedMetricGraph, core

Point = Tuple[int, int]


def _cross(o: Sequence, a: Sequence, b: Sequence):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_polygon(points: Sequence[Point]) -> Tuple[Point, ...]:
    """Vertices of the convex hull, counter-clockwise from the lexicographic minimum."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)

    def chain(seq):
        out: List[Point] = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    return tuple(lower[:-1] + upper[:-1])


def lattice_length(a: Sequence[int], b: Sequence[int]) -> int:
    return math.gcd(b[0] - a[0], b[1] - a[1])


def twice_area(poly: Sequence[Point]) -> int:
    n = len(poly)
    return abs(sum(poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1]
                   for i in range(n)))


def interior_point_count(poly: Sequence[Point]) -> int:
    """Pick's theorem: 2A = 2I + B - 2."""
    n = len(poly)
    boundary = sum(lattice_length(poly[i], poly[(i + 1) % n]) for i in range(n))
    return (twice_area(poly) - boundary + 2) // 2


def _inner_normal(a: Point, b: Point) -> Tuple[int, int]:
    # polygon is counter-clockwise, so the interior is on the left of a -> b
    dx, dy = b[0] - a[0], b[1] - a[1]
    g = math.gcd(dx, dy)
    return (-dy // g, dx // g)


@dataclass(frozen=True)
class PlaneCurveInput:
    """A plane curve as a list of (exponent, coefficient) terms.

    Homogeneous inputs carry exponent triples of constant degree and are
    dehomogenized by setting the last variable to 1.  Under an explicit
    valuation a term's value is looked up by its exponent written as
    ``"i,j"`` (or ``"i,j,k"``).
    """

    terms: Tuple[Tuple[Tuple[int, ...], Fraction], ...]
    valuation: Valuation
    homogeneous: bool = False
    smooth: bool = True

    def __post_init__(self):
        if len(self.terms) < 3:
            raise InvalidInput("a plane curve needs at least three terms")
        width = 3 if self.homogeneous else 2
        seen = set()
        for exp, _ in self.terms:
            if len(exp) != width or any(e < 0 for e in exp):
                raise InvalidInput(f"bad exponent {exp!r}")
            if exp in seen:
                raise InvalidInput(f"repeated exponent {exp!r}")
            seen.add(exp)
        if self.homogeneous and len({sum(e) for e, _ in self.terms}) != 1:
            raise InvalidInput("homogeneous terms of different degrees")

    def term_valuation(self, exp: Tuple[int, ...], coeff: Fraction):
        if isinstance(self.valuation, Explicit):
            if coeff == 0:
                return INF
            return self.valuation(",".join(map(str, exp)))
        return self.valuation(coeff)

    def lifted(self) -> Dict[Point, Fraction]:
        """Affine exponent -> valuation, dropping terms of infinite valuation."""
        out: Dict[Point, Fraction] = {}
        for exp, c in self.terms:
            v = self.term_valuation(exp, c)
            if v == INF:
                continue
            out[(exp[0], exp[1])] = Fraction(v)
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "PlaneCurveInput":
        try:
            terms = tuple((tuple(int(e) for e in t["exponent"]), to_rational(t.get("coefficient", 1)))
                          for t in obj["terms"])
            val = valuation_from_json(obj["valuation"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed plane curve: {exc}") from None
        return cls(terms, val, bool(obj.get("homogeneous", False)), bool(obj.get("smooth", True)))

    def to_json(self) -> dict:
        return {
            "terms": [{"exponent": list(e), "coefficient": fmt_rational(c)} for e, c in self.terms],
            "valuation": valuation_to_json(self.valuation),
            "homogeneous": self.homogeneous,
            "smooth": self.smooth,
        }


@dataclass(frozen=True)
class Cell:
    vertices: Tuple[Point, ...]     # counter-clockwise
    points: Tuple[Point, ...]       # all lifted points on the facet
    vertex: Tuple[Fraction, Fraction]

    def edges(self) -> List[Tuple[Point, Point]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def is_unimodular_triangle(self) -> bool:
        return len(self.vertices) == 3 and twice_area(self.vertices) == 1


@dataclass(frozen=True)
class Subdivision:
    polygon: Tuple[Point, ...]
    heights: Mapping[Point, Fraction]
    cells: Tuple[Cell, ...]
    # undirected segment -> indices of cells containing it (one for boundary)
    segments: Mapping[Tuple[Point, Point], Tuple[int, ...]]

    def adjacency(self) -> List[Tuple[int, int, Tuple[Point, Point]]]:
        return sorted((c[0], c[1], seg) for seg, c in self.segments.items() if len(c) == 2)

    def boundary_segments(self) -> List[Tuple[int, Tuple[Point, Point]]]:
        return sorted((c[0], seg) for seg, c in self.segments.items() if len(c) == 1)

    def interior_points(self) -> int:
        return interior_point_count(self.polygon)

    def is_unimodular(self) -> bool:
        return all(c.is_unimodular_triangle() for c in self.cells)

    def to_json(self) -> dict:
        return {
            "polygon": [list(p) for p in self.polygon],
            "cells": [{"vertices": [list(p) for p in c.vertices],
                       "points": [list(p) for p in c.points],
                       "unimodular": c.is_unimodular_triangle()} for c in self.cells],
            "adjacency": [[i, j] for i, j, _ in self.adjacency()],
        }


def _segment(a: Point, b: Point) -> Tuple[Point, Point]:
    return (a, b) if a <= b else (b, a)


def newton_subdivision(f: PlaneCurveInput) -> Subdivision:
    """Regular subdivision of the Newton polygon induced by coefficient valuations."""
    heights = f.lifted()
    pts = sorted(heights)
    if len(pts) < 3 or affine_rank(pts) < 2:
        raise DegenerateNewtonPolygon("Newton polygon is not two-dimensional")
    polygon = convex_polygon(pts)
    cells = []
    for facet in lower_hull([(p[0], p[1], heights[p]) for p in pts]):
        on = tuple(sorted(pts[i] for i in facet.points))
        verts = convex_polygon(on)
        cells.append(Cell(verts, on, (-facet.slope[0], -facet.slope[1])))
    cells.sort(key=lambda c: (c.vertices, c.vertex))
    segments: Dict[Tuple[Point, Point], List[int]] = {}
    for i, c in enumerate(cells):
        for a, b in c.edges():
            segments.setdefault(_segment(a, b), []).append(i)
    bad = [s for s, owners in segments.items() if len(owners) > 2]
    if bad:
        raise InvalidInput(f"subdivision segment {bad[0]} bounds more than two cells")
    return Subdivision(polygon, dict(heights), tuple(cells),
                       {s: tuple(o) for s, o in sorted(segments.items())})


@dataclass(frozen=True)
class TropicalEdge:
    src: int
    dst: int
    direction: Tuple[int, int]      # primitive, from src to dst
    length: Fraction
    multiplicity: int
    dual: Tuple[Point, Point]


@dataclass(frozen=True)
class TropicalRay:
    at: int
    direction: Tuple[int, int]
    multiplicity: int
    dual: Tuple[Point, Point]


@dataclass(frozen=True)
class PlaneTropicalCurve:
    subdivision: Subdivision
    vertices: Tuple[Tuple[Fraction, Fraction], ...]
    edges: Tuple[TropicalEdge, ...]
    rays: Tuple[TropicalRay, ...]

    def valence(self, v: int) -> int:
        return (sum((e.src == v) + (e.dst == v) for e in self.edges)
                + sum(r.at == v for r in self.rays))

    def first_betti(self) -> int:
        # the dual graph of a subdivision of a polygon is connected
        return len(self.edges) - len(self.vertices) + 1

    def balancing_defect(self, v: int) -> Tuple[int, int]:
        sx = sy = 0
        for e in self.edges:
            if e.src == v:
                sx += e.multiplicity * e.direction[0]
                sy += e.multiplicity * e.direction[1]
            if e.dst == v:
                sx -= e.multiplicity * e.direction[0]
                sy -= e.multiplicity * e.direction[1]
        for r in self.rays:
            if r.at == v:
                sx += r.multiplicity * r.direction[0]
                sy += r.multiplicity * r.direction[1]
        return sx, sy

    def is_balanced(self) -> bool:
        return all(self.balancing_defect(v) == (0, 0) for v in range(len(self.vertices)))

    def to_json(self) -> dict:
        return {
            "vertices": [[fmt_rational(x) for x in w] for w in self.vertices],
            "edges": [{"src": e.src, "dst": e.dst, "direction": list(e.direction),
                       "length": fmt_rational(e.length), "multiplicity": e.multiplicity}
                      for e in self.edges],
            "rays": [{"at": r.at, "direction": list(r.direction), "multiplicity": r.multiplicity}
                     for r in self.rays],
            "first_betti": self.first_betti(),
        }


def tropical_curve(S: Subdivision) -> PlaneTropicalCurve:
    verts = tuple(c.vertex for c in S.cells)
    edges = []
    for i, j, seg in S.adjacency():
        wi, wj = verts[i], verts[j]
        diff = (wj[0] - wi[0], wj[1] - wi[1])
        u = primitive(diff, sign_normalize=False)
        k = 0 if u[0] != 0 else 1
        edges.append(TropicalEdge(i, j, (u[0], u[1]), diff[k] / u[k],
                                  lattice_length(*seg), seg))
    rays = []
    for i, seg in S.boundary_segments():
        a, b = seg
        # orient along the counter-clockwise boundary of the cell
        cell_edges = S.cells[i].edges()
        if (a, b) not in cell_edges:
            a, b = b, a
        rays.append(TropicalRay(i, _inner_normal(a, b), lattice_length(a, b), seg))
    return PlaneTropicalCurve(S, verts, tuple(edges), tuple(rays))


@dataclass(frozen=True)
class Certificate:
    certified: bool
    genus: int
    first_betti: int
    violations: Tuple[Tuple[str, str], ...] = ()
    fast_path: bool = False

    def __bool__(self) -> bool:
        return self.certified

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "genus": self.genus,
            "first_betti": self.first_betti,
            "violations": [{"kind": k, "detail": d} for k, d in self.violations],
        }


def _pt(p: Point) -> str:
    return f"({p[0]},{p[1]})"


def faithfulness_certificate(C: PlaneTropicalCurve, g: Optional[int] = None,
                             smooth: bool = True) -> Certificate:
    """Check trivalence, unit multiplicities and ``b1 == g``.

    ``g`` defaults to the number of interior lattice points of the Newton
    polygon, which is the genus only for a smooth curve.
    """
    S = C.subdivision
    if g is None:
        if not smooth:
            raise InvalidInput("genus must be supplied for a singular curve")
        g = S.interior_points()
    b1 = C.first_betti()
    if S.is_unimodular():
        # unimodular triangles dualize to trivalent vertices with unit edges
        if b1 == g:
            return Certificate(True, g, b1, (), True)
        return Certificate(False, g, b1, (("first_betti", f"b1={b1} but genus={g}"),), True)
    violations: List[Tuple[str, str]] = []
    for c in S.cells:
        if not c.is_unimodular_triangle():
            violations.append(("non_unimodular_cell", " ".join(_pt(p) for p in c.vertices)))
    if b1 != g:
        violations.append(("first_betti", f"b1={b1} but genus={g}"))
    for v in range(len(C.vertices)):
        val = C.valence(v)
        if val != 3:
            violations.append(("non_trivalent_vertex",
                               f"vertex {v} at ({fmt_rational(C.vertices[v][0])},"
                               f"{fmt_rational(C.vertices[v][1])}) has valence {val}"))
    for e in C.edges:
        if e.multiplicity != 1:
            violations.append(("edge_multiplicity", f"edge {e.src}-{e.dst} has multiplicity {e.multiplicity}"))
    for r in C.rays:
        if r.multiplicity != 1:
            violations.append(("edge_multiplicity", f"ray at {r.at} has multiplicity {r.multiplicity}"))
    hypotheses = {"first_betti", "non_trivalent_vertex", "edge_multiplicity"}
    ok = not any(k in hypotheses for k, _ in violations)
    return Certificate(ok, g, b1, tuple(violations), False)


def skeleton(C: PlaneTropicalCurve, certificate: Optional[Certificate] = None) -> WeightedMetricGraph:
    """Minimal skeleton of a certified tropical curve: rays and trees removed."""
    if certificate is None:
        certificate = faithfulness_certificate(C)
    if not certificate.certified:
        raise NotCertifiedError("tropical curve is not certified faithful",
                                violations=[k for k, _ in certificate.violations])
    if C.first_betti() == 0:
        raise UnsupportedGenus("tropical curve has no cycles")
    G = WeightedMetricGraph({v: 0 for v in range(len(C.vertices))},
                            [Edge(i, e.src, e.dst, e.length) for i, e in enumerate(C.edges)])
    return core(G)


@dataclass(frozen=True)
class PlaneTropicalResult:
    subdivision: Subdivision
    curve: PlaneTropicalCurve
    certificate: Certificate
    skeleton: Optional[WeightedMetricGraph] = None

    def to_json(self) -> dict:
        out = {"subdivision": self.subdivision.to_json(), "curve": self.curve.to_json(),
               "certificate": self.certificate.to_json()}
        if self.skeleton is not None:
            out["skeleton"] = self.skeleton.to_json()
        return out


def plane_tropicalization(f: PlaneCurveInput, g: Optional[int] = None) -> PlaneTropicalResult:
    S = newton_subdivision(f)
    C = tropical_curve(S)
    cert = faithfulness_certificate(C, g, f.smooth)
    skel = None
    if cert.certified and C.first_betti() > 0:
        skel = skeleton(C, cert)
    return PlaneTropicalResult(S, C, cert, skel)


def to_svg(C: PlaneTropicalCurve, size: int = 320) -> str:
    """Static two-panel picture: subdivision on the left, tropical curve on the right."""
    S = C.subdivision
    pad = 20

    def frame(points, x0):
        xs = [float(p[0]) for p in points]
        ys = [float(p[1]) for p in points]
        lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
        span = max(hi_x - lo_x, hi_y - lo_y, 1.0)
        scale = (size - 2 * pad) / span

        def tr(p):
            return (x0 + pad + (float(p[0]) - lo_x) * scale,
                    size - pad - (float(p[1]) - lo_y) * scale)
        return tr, span

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * size}" height="{size}" '
             f'viewBox="0 0 {2 * size} {size}">',
             '<rect width="100%" height="100%" fill="white"/>']
    tr, _ = frame(S.polygon, 0)
    for c in S.cells:
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(tr, c.vertices))
        fill = "#e8f0ff" if c.is_unimodular_triangle() else "#ffe8d0"
        lines.append(f'<polygon points="{pts}" fill="{fill}" stroke="black" stroke-width="1"/>')
    for p in sorted(S.heights):
        x, y = tr(p)
        lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="black"/>')

    cloud = list(C.vertices) or [(0, 0)]
    tr2, span = frame(cloud, size)
    reach = span * 0.25 if len(cloud) > 1 else 1.0
    for e in C.edges:
        (x1, y1), (x2, y2) = tr2(C.vertices[e.src]), tr2(C.vertices[e.dst])
        w = 1 + e.multiplicity
        lines.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                     f'stroke="navy" stroke-width="{w}"/>')
    for r in C.rays:
        base = C.vertices[r.at]
        norm = math.hypot(*r.direction)
        tip = (float(base[0]) + reach * r.direction[0] / norm, float(base[1]) + reach * r.direction[1] / norm)
        (x1, y1), (x2, y2) = tr2(base), tr2(tip)
        lines.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                     f'stroke="navy" stroke-width="{1 + r.multiplicity}" stroke-dasharray="4,2"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
