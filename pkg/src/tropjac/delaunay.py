"""Delaunay subdivisions of Z^g under a quadratic form, their secondary cones,
Voronoi cells and the tropical theta function."""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Sequence, Tuple

from . import _kernels
from .errors import (
    InvalidInput, NotPSD, NotSimpleUnimodular, UnsupportedDimension, WindowLimitExceeded,
)
from .exact.cones import PolyhedralCone
from .exact.hull import _initial_simplex, affine_rank, convex_hull, lower_hull
from .exact.linalg import (
    congruence, det, hermite_unimodular_complete, identity, inverse, ldl, matvec,
    primitive, quad, quad_functional, rank, solve, sym_dim,
)
from .exact.lp import interiors_meet
from .period_matrix import QuadraticForm

MAX_G = 4
Point = Tuple[int, ...]


def _as_form(Q) -> QuadraticForm:
    return Q if isinstance(Q, QuadraticForm) else QuadraticForm(Q)


def _max_window() -> int:
    try:
        return int(os.environ.get("TROPJAC_MAX_CELLS", "1000000"))
    except ValueError:
        return 1000000


# -- lattice enumeration ------------------------------------------------------

class _Enumerator:
    """Lattice points in Q-ellipsoids; float search with slack, exact filter."""

    def __init__(self, Q: Sequence[Sequence[Fraction]]):
        self.Q = [list(r) for r in Q]
        d, L = ldl(self.Q)
        if any(x <= 0 for x in d):
            raise NotPSD("form is not positive definite")
        self.Lf = [[float(x) for x in row] for row in L]
        self.df = [float(x) for x in d]

    def ball(self, center: Sequence[Fraction], bound: Fraction) -> List[Tuple[Point, Fraction]]:
        """All (y, q) with q = (y-c)^T Q (y-c) <= bound, exact."""
        cf = [float(c) for c in center]
        cands = _kernels.ellipsoid_candidates(self.Lf, self.df, cf, float(bound))
        out = []
        for y in cands:
            diff = [Fraction(a) - c for a, c in zip(y, center)]
            q = quad(self.Q, diff)
            if q <= bound:
                out.append((tuple(int(a) for a in y), q))
        out.sort()
        return out


def lattice_points_in_ellipsoid(Q, center: Sequence, bound) -> List[Point]:
    """Integer points y with (y - center)^T Q (y - center) <= bound (Q definite)."""
    Qm = _as_form(Q).matrix
    return [y for y, _ in _Enumerator(Qm).ball([Fraction(c) for c in center], Fraction(bound))]


# -- reduction ------------------------------------------------------------------

def reduce_to_definite(Q) -> Tuple[List[List[Fraction]], List[List[int]], int]:
    """(Q', U, k) with U^T Q U = diag(Q', 0_k), Q' definite, U unimodular."""
    form = _as_form(Q)
    K = form.kernel_basis
    g = form.g
    U = hermite_unimodular_complete(K, g) if K else identity(g)
    M = congruence(form.matrix, U)
    gp = g - len(K)
    Qp = [[Fraction(M[i][j]) for j in range(gp)] for i in range(gp)]
    if any(M[i][j] != 0 for i in range(g) for j in range(g) if i >= gp or j >= gp):
        raise NotPSD("kernel completion failed to split the form")
    return Qp, [list(map(int, r)) for r in U], len(K)


# -- cells ----------------------------------------------------------------------

def _halfspaces(verts: Sequence[Point]) -> Tuple[List[List[int]], List[int]]:
    """Inequalities a.x <= b describing the full-dimensional polytope conv(verts)."""
    g = len(verts[0])
    if g == 1:
        xs = [v[0] for v in verts]
        return [[1], [-1]], [max(xs), -min(xs)]
    facets = convex_hull(verts)
    return [list(f.normal) for f in facets], [f.offset for f in facets]


def _meets_open_cube(verts: Sequence[Point]) -> bool:
    g = len(verts[0])
    for k in range(g):
        lo = min(v[k] for v in verts)
        hi = max(v[k] for v in verts)
        if hi <= 0 or lo >= 1:
            return False
    if all(0 <= x <= 1 for v in verts for x in v):
        return True
    A, b = _halfspaces(verts)
    cube_A = [[int(i == k) for i in range(g)] for k in range(g)] + [[-int(i == k) for i in range(g)] for k in range(g)]
    cube_b = [1] * g + [0] * g
    return interiors_meet(A, b, cube_A, cube_b)


def _facet_vertex_sets(verts: Sequence[Point]) -> List[FrozenSet[Point]]:
    g = len(verts[0])
    if g == 1:
        xs = sorted(verts)
        return [frozenset([xs[0]]), frozenset([xs[-1]])]
    return [frozenset(verts[i] for i in f.points) for f in convex_hull(verts)]


def _face_lattice(verts: Sequence[Point]) -> Dict[int, List[FrozenSet[Point]]]:
    """Proper nonempty faces and the polytope itself, grouped by dimension."""
    g = len(verts[0])
    facets = _facet_vertex_sets(verts)
    faces = set(facets)
    frontier = set(facets)
    while frontier:
        nxt = set()
        for a in frontier:
            for b in facets:
                c = a & b
                if c and c not in faces:
                    nxt.add(c)
        faces |= nxt
        frontier = nxt
    out: Dict[int, List[FrozenSet[Point]]] = {g: [frozenset(verts)]}
    for f in faces:
        out.setdefault(affine_rank(sorted(f)), []).append(f)
    return out


def _translate(cell, t) -> Tuple[Point, ...]:
    return tuple(sorted(tuple(a + b for a, b in zip(v, t)) for v in cell))


def _normalize(cell) -> Tuple[Point, ...]:
    m = min(cell)
    return _translate(cell, [-x for x in m])


@dataclass(frozen=True)
class DelaunaySubdivision:
    """Cells of Del(Q) whose interior meets [0,1)^g.

    For a degenerate form the cells live in the image of the definite part and
    ``lineality`` lists the directions along which every cell is a cylinder.
    """

    form: QuadraticForm
    cells: Tuple[Tuple[Point, ...], ...]
    lifts: Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]
    lineality: Tuple[Point, ...] = ()
    window_points: int = 0

    @property
    def g(self) -> int:
        return self.form.g

    def cell_classes(self) -> List[Tuple[Point, ...]]:
        """Cells up to Z^g-translation, each moved to have lexicographic minimum 0."""
        return sorted({_normalize(c) for c in self.cells})

    def circumcenter(self, i: int) -> Tuple[Fraction, ...]:
        slope, _ = self.lifts[i]
        Qi = inverse(self.form.matrix)
        return tuple(x / 2 for x in matvec(Qi, slope))

    def adjacency(self) -> List[Tuple[int, int]]:
        """Pairs of listed cells sharing a codimension-one face."""
        out = []
        g = self.g - len(self.lineality)
        for i, j in combinations(range(len(self.cells)), 2):
            common = sorted(set(self.cells[i]) & set(self.cells[j]))
            if len(common) >= g and affine_rank(common) == g - 1:
                out.append((i, j))
        return out

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "cells": [[list(v) for v in c] for c in self.cells],
            "lineality": [list(v) for v in self.lineality],
            "classes": len(self.cell_classes()),
        }


def _certify(en: _Enumerator, Q, slope, const, verts) -> bool:
    """No lattice point strictly inside the circumellipsoid, and every point on
    it is a vertex of the cell."""
    c = [x / 2 for x in matvec(inverse(Q), slope)]
    r2 = quad(Q, c) + const
    vs = set(verts)
    for y, _ in en.ball(c, r2):
        gap = quad(Q, y) - const - sum(a * b for a, b in zip(slope, y))
        if gap < 0 or (gap == 0 and y not in vs):
            return False
    return True


def _definite_cells(Q: List[List[Fraction]]):
    g = len(Q)
    if g == 0:
        return [((),)], [((), Fraction(0))], 1
    en = _Enumerator(Q)
    center = [Fraction(1, 2)] * g
    R = max(quad(Q, [Fraction(s) - Fraction(1, 2) for s in corner]) for corner in product((0, 1), repeat=g))
    # smallest window that contains the cube; the certificate decides whether to grow it
    limit = _max_window()
    while True:
        pts = [y for y, _ in en.ball(center, R)]
        if len(pts) > limit:
            raise WindowLimitExceeded(f"enumeration window exceeds {limit} points", points=len(pts))
        lifted = [list(p) + [quad(Q, p)] for p in pts]
        facets = lower_hull(lifted)
        cells, lifts = [], []
        ok = True
        for f in facets:
            verts = tuple(sorted(pts[i] for i in f.points))
            if not _meets_open_cube(verts):
                continue
            if not _certify(en, Q, f.slope, f.constant, verts):
                ok = False
                break
            cells.append(verts)
            lifts.append((tuple(f.slope), f.constant))
        if ok:
            order = sorted(range(len(cells)), key=lambda i: cells[i])
            return [cells[i] for i in order], [lifts[i] for i in order], len(pts)
        R *= 2


def delaunay_subdivision(Q) -> DelaunaySubdivision:
    form = _as_form(Q)
    g = form.g
    if g > MAX_G:
        raise UnsupportedDimension(f"g = {g} exceeds the supported bound {MAX_G}", g=g)
    if form.is_positive_definite():
        cells, lifts, n = _definite_cells(form.matrix)
        return DelaunaySubdivision(form, tuple(cells), tuple(lifts), (), n)
    Qp, U, k = reduce_to_definite(form)
    gp = g - k
    cells, lifts, n = _definite_cells(Qp)
    P = [row[:gp] for row in U]  # g x gp
    # cylinders over the definite cells, one representative per translation class
    mapped = sorted({_normalize([tuple(sum(P[i][j] * y[j] for j in range(gp)) for i in range(g)) for y in c])
                     for c in cells})
    lin = tuple(tuple(U[i][j] for i in range(g)) for j in range(gp, g))
    # lifts stay in the reduced coordinates
    return DelaunaySubdivision(form, tuple(mapped), (), lin, n)


# -- secondary cone -------------------------------------------------------------

def _barycentric(simplex: Sequence[Point], p: Point) -> List[Fraction]:
    g = len(p)
    A = [[Fraction(simplex[j][i]) for j in range(g + 1)] for i in range(g)] + [[Fraction(1)] * (g + 1)]
    lam = solve(A, [Fraction(x) for x in p] + [Fraction(1)])
    if lam is None:
        raise InvalidInput("degenerate simplex")
    return lam


def _regulator(simplex: Sequence[Point], p: Point, g: int) -> List[int]:
    """Integer row r with r . vec(Q) = p^T Q p - (affine interpolation of the lift at p)."""
    lam = _barycentric(simplex, p)
    row = [Fraction(x) for x in quad_functional(p, g)]
    for l, v in zip(lam, simplex):
        if l:
            for k, c in enumerate(quad_functional(v, g)):
                row[k] -= l * c
    if not any(row):
        return [0] * len(row)
    return primitive(row, sign_normalize=False)


def _neighbors(cells: Sequence[Tuple[Point, ...]], cell: Tuple[Point, ...], face: FrozenSet[Point]):
    s0 = min(face)
    own = frozenset(cell)
    out = set()
    for other in cells:
        for w in other:
            t = [a - b for a, b in zip(s0, w)]
            moved = frozenset(_translate(other, t))
            if face <= moved and moved != own:
                out.add(moved)
    return out


def secondary_cone_of_form(Q) -> PolyhedralCone:
    """Closed cone of forms whose Delaunay subdivision coarsens Del(Q), as
    linear constraints on Sym^2 coordinates (Q_ij, i <= j)."""
    form = _as_form(Q)
    g = form.g
    if g > MAX_G:
        raise UnsupportedDimension(f"g = {g} exceeds the supported bound {MAX_G}", g=g)
    if not form.is_positive_definite():
        raise NotPSD("secondary cone needs a positive definite form; reduce first")
    D = delaunay_subdivision(form)
    eqs, ineqs = set(), set()
    for cell in D.cells:
        idx = _initial_simplex([list(v) for v in cell])
        simplex = [cell[i] for i in idx]
        for v in cell:
            if v not in simplex:
                r = _regulator(simplex, v, g)
                if any(r):
                    eqs.add(tuple(primitive(r)))
        own = set(cell)
        for face in _facet_vertex_sets(list(cell)):
            for nb in _neighbors(D.cells, cell, face):
                for p in nb:
                    if p in own:
                        continue
                    r = _regulator(simplex, p, g)
                    if any(r):
                        ineqs.add(tuple(r))
    return PolyhedralCone(sym_dim(g), inequalities=sorted(ineqs), equations=sorted(eqs))


# -- Voronoi cell -----------------------------------------------------------------

@dataclass(frozen=True)
class VoronoiCell:
    """Voronoi cell of 0 with faces indexed by dimension.

    ``faces[k]`` lists vertex-index sets of the k-dimensional faces.
    ``divisor_counts[k]`` counts k-faces of the theta divisor per period.
    """

    g: int
    vertices: Tuple[Tuple[Fraction, ...], ...]
    faces: Dict[int, Tuple[FrozenSet[int], ...]]
    divisor_counts: Tuple[int, ...]

    @property
    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(self.faces.get(k, ())) for k in range(self.g))

    def is_simple(self) -> bool:
        if self.g < 2:
            return True
        deg = Counter(i for e in self.faces[1] for i in e)
        return all(deg[i] == self.g for i in range(len(self.vertices)))

    def facet_sizes(self) -> Counter:
        return Counter(len(f) for f in self.faces.get(self.g - 1, ()))

    def centrally_symmetric(self) -> bool:
        vs = set(self.vertices)
        return all(tuple(-x for x in v) in vs for v in vs)

    def to_json(self) -> dict:
        from .exact.numbers import fmt_rational
        return {
            "g": self.g,
            "vertices": [[fmt_rational(x) for x in v] for v in self.vertices],
            "f_vector": list(self.f_vector),
            "divisor_f_vector": list(self.divisor_counts),
            "simple": self.is_simple(),
        }


def voronoi_cell(Q) -> VoronoiCell:
    form = _as_form(Q)
    g = form.g
    if g > MAX_G:
        raise UnsupportedDimension(f"g = {g} exceeds the supported bound {MAX_G}", g=g)
    if not form.is_positive_definite():
        raise NotPSD("Voronoi cell needs a positive definite form")
    D = delaunay_subdivision(form)
    Qi = inverse(form.matrix)
    classes = D.cell_classes()
    centers = {}
    for cell, (slope, _) in zip(D.cells, D.lifts):
        centers[_normalize(cell)] = (cell, tuple(x / 2 for x in matvec(Qi, slope)))
    # cells through 0 with their circumcenters
    around: Dict[FrozenSet[Point], Tuple[Fraction, ...]] = {}
    for cls in classes:
        cell, cc = centers[cls]
        for v in cell:
            moved = frozenset(_translate(cell, [-x for x in v]))
            around[moved] = tuple(c - x for c, x in zip(cc, v))
    order = sorted(around, key=lambda c: around[c])
    vertices = tuple(around[c] for c in order)
    vindex = {c: i for i, c in enumerate(order)}
    zero = tuple([0] * g)
    del_faces: Dict[int, set] = {}
    per_period: Dict[int, set] = {}
    for cell in order:
        for k, fs in _face_lattice(sorted(cell)).items():
            if k == 0:
                continue
            for f in fs:
                per_period.setdefault(k, set()).add(_normalize(f))
                if zero in f:
                    del_faces.setdefault(k, set()).add(f)
    faces: Dict[int, Tuple[FrozenSet[int], ...]] = {}
    for k, fs in del_faces.items():
        dual = []
        for f in fs:
            dual.append(frozenset(vindex[c] for c in order if f <= c))
        faces[g - k] = tuple(sorted(dual, key=sorted))
    counts = tuple(len(per_period.get(g - k, ())) for k in range(g))
    return VoronoiCell(g, vertices, faces, counts)


# -- theta function -------------------------------------------------------------

class ThetaFunction:
    """Tropical theta function of a fixed definite form (reuses its factorization)."""

    def __init__(self, Q):
        form = _as_form(Q)
        if form.g > MAX_G:
            raise UnsupportedDimension(f"g = {form.g} exceeds the supported bound {MAX_G}", g=form.g)
        if not form.is_positive_definite():
            raise NotPSD("theta needs a positive definite form")
        self.form = form
        self._M = form.matrix
        self._en = _Enumerator(self._M) if form.g else None

    def __call__(self, x: Sequence) -> Tuple[Fraction, List[Point]]:
        """max over lattice points l of l^T Q x - l^T Q l / 2, with all maximizers."""
        M = self._M
        if len(x) != len(M):
            raise InvalidInput("point has the wrong dimension")
        if not M:
            return Fraction(0), [()]
        x = [Fraction(a) for a in x]
        # the rounded point bounds the distance to the closest lattice vector
        guess = [round(a) for a in x]
        bound = quad(M, [b - a for a, b in zip(x, guess)])
        ball = self._en.ball(x, bound)
        best = min(q for _, q in ball)
        argmax = sorted(y for y, q in ball if q == best)
        return (quad(M, x) - best) / 2, argmax

    def on_divisor(self, x: Sequence) -> bool:
        return len(self(x)[1]) >= 2


def theta(Q, x: Sequence) -> Tuple[Fraction, List[Point]]:
    """max over lattice points l of l^T Q x - l^T Q l / 2, with all maximizers."""
    return ThetaFunction(Q)(x)


def theta_divisor_membership(Q, x: Sequence) -> bool:
    return len(theta(Q, x)[1]) >= 2


# -- hyperplanes to matrix --------------------------------------------------------

def check_simple_unimodular(vectors: Sequence[Sequence[int]]) -> None:
    if not vectors:
        raise NotSimpleUnimodular("no vectors")
    g = len(vectors[0])
    vs = [tuple(int(a) for a in v) for v in vectors]
    if any(len(v) != g for v in vs):
        raise NotSimpleUnimodular("vectors have different lengths")
    if any(not any(v) for v in vs):
        raise NotSimpleUnimodular("zero column")
    seen = set()
    for v in vs:
        p = tuple(primitive(v))
        if p in seen:
            raise NotSimpleUnimodular("parallel columns", vector=list(v))
        seen.add(p)
    if rank([list(v) for v in vs]) != g:
        raise NotSimpleUnimodular("columns do not span")
    for sub in combinations(vs, g):
        if abs(det([list(r) for r in sub])) > 1:
            raise NotSimpleUnimodular("maximal minor outside {0, 1, -1}", columns=[list(r) for r in sub])


def matrix_from_hyperplanes(normals: Sequence[Sequence[int]]) -> QuadraticForm:
    """Sum of v v^T over normals forming a simple unimodular configuration."""
    check_simple_unimodular(normals)
    g = len(normals[0])
    Q = [[Fraction(0)] * g for _ in range(g)]
    for v in normals:
        for i in range(g):
            for j in range(g):
                Q[i][j] += v[i] * v[j]
    return QuadraticForm(Q)
