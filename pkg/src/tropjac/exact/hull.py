"""Exact convex hulls in ambient dimension <= 5 and lower hulls of lifts.

Incremental beneath-beyond construction over integer coordinates with
conflict lists.  Coplanar simplicial facets are merged at the end, so the
returned facets are genuine (possibly non-simplicial) facets with every input
point lying on them listed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from .. import _kernels
from ..errors import DegenerateLift, InvalidInput
from .linalg import det, rank

MAX_AMBIENT = 5


@dataclass(frozen=True)
class Facet:
    """Hyperplane ``normal . x = offset`` with all points on the ``<=`` side."""

    normal: Tuple[int, ...]
    offset: int
    points: Tuple[int, ...]


@dataclass(frozen=True)
class LowerFacet:
    """Lower facet of a lifted point set.

    ``height(x) = constant + slope . x`` on the facet; every input point lies
    on or above it.
    """

    slope: Tuple[Fraction, ...]
    constant: Fraction
    points: Tuple[int, ...]

    def height(self, x: Sequence) -> Fraction:
        return self.constant + sum(a * Fraction(b) for a, b in zip(self.slope, x))


def _integerize(points: Sequence[Sequence]) -> Tuple[List[Tuple[int, ...]], int]:
    den = 1
    for p in points:
        for x in p:
            q = Fraction(x).denominator
            den = den * q // math.gcd(den, q)
    return [tuple(int(Fraction(x) * den) for x in p) for p in points], den


def _normal_of(pts: Sequence[Sequence[int]]) -> Tuple[List[int], int]:
    """Primitive normal and offset of the hyperplane through n points in Z^n."""
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    n = len(base)
    normal = []
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in diffs]
        normal.append((-1) ** j * det(minor))
    g = 0
    for x in normal:
        g = math.gcd(g, x)
    if g == 0:
        raise InvalidInput("degenerate facet")
    normal = [x // g for x in normal]
    return normal, sum(a * b for a, b in zip(normal, base))


def _initial_simplex(pts: Sequence[Sequence[int]]) -> List[int]:
    chosen = [0]
    diffs: List[List[int]] = []
    n = len(pts[0])
    for i in range(1, len(pts)):
        cand = diffs + [[a - b for a, b in zip(pts[i], pts[0])]]
        if rank(cand) == len(cand):
            diffs = cand
            chosen.append(i)
            if len(chosen) == n + 1:
                break
    return chosen


def affine_rank(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs else 0


def convex_hull(points: Sequence[Sequence]) -> List[Facet]:
    """Facets of the convex hull of full-dimensional ``points`` (exact).

    Normals and offsets refer to the integer-scaled coordinates: the scale
    factor is the lcm of all denominators, which leaves the facet structure
    unchanged.
    """
    ipts, _ = _integerize(points)
    n = len(ipts[0])
    if n > MAX_AMBIENT or n < 2:
        raise InvalidInput(f"ambient dimension {n} outside 2..{MAX_AMBIENT}")
    simplex = _initial_simplex(ipts)
    if len(simplex) < n + 1:
        raise DegenerateLift("points are not full-dimensional")
    maxabs = max(abs(x) for p in ipts for x in p)
    arr = np.array(ipts, dtype=np.int64) if maxabs < (1 << 30) else None
    interior = [sum(ipts[i][k] for i in simplex) for k in range(n)]  # (n+1) * centroid

    facets: Dict[int, Tuple[Tuple[int, ...], List[int], int]] = {}
    outside: Dict[int, List[int]] = {}
    ridges: Dict[FrozenSet[int], List[int]] = {}
    conflicts: Dict[int, set] = {i: set() for i in range(len(ipts))}
    next_id = [0]

    def add_facet(verts: Tuple[int, ...], candidates) -> None:
        normal, offset = _normal_of([ipts[v] for v in verts])
        if sum(a * b for a, b in zip(normal, interior)) > offset * (n + 1):
            normal = [-a for a in normal]
            offset = -offset
        fid = next_id[0]
        next_id[0] += 1
        facets[fid] = (verts, normal, offset)
        vis = _kernels.positive_side(normal, offset, ipts, sorted(candidates), arr, maxabs)
        outside[fid] = vis
        for p in vis:
            conflicts[p].add(fid)
        for r in combinations(verts, n - 1):
            ridges.setdefault(frozenset(r), []).append(fid)

    others = [i for i in range(len(ipts)) if i not in simplex]
    for face in combinations(sorted(simplex), n):
        add_facet(face, others)

    for p in others:
        visible = conflicts[p]
        if not visible:
            continue
        visible = set(visible)
        horizon = []
        for fid in visible:
            verts = facets[fid][0]
            for r in combinations(verts, n - 1):
                key = frozenset(r)
                other = [f for f in ridges[key] if f != fid]
                if other and other[0] not in visible:
                    horizon.append((r, fid, other[0]))
        for fid in visible:
            verts = facets[fid][0]
            for r in combinations(verts, n - 1):
                key = frozenset(r)
                ridges[key] = [f for f in ridges[key] if f != fid]
                if not ridges[key]:
                    del ridges[key]
            for q in outside[fid]:
                conflicts[q].discard(fid)
        new_specs = []
        for r, fvis, fhid in sorted(horizon):
            cands = set(outside[fvis]) | set(outside[fhid])
            cands.discard(p)
            new_specs.append((tuple(sorted(r + (p,))), cands))
        for fid in visible:
            del facets[fid]
            del outside[fid]
        for verts, cands in new_specs:
            add_facet(verts, cands)

    merged: Dict[Tuple[Tuple[int, ...], int], None] = {}
    for verts, normal, offset in facets.values():
        merged[(tuple(normal), offset)] = None
    result = []
    for normal, offset in merged:
        on = tuple(i for i, p in enumerate(ipts) if sum(a * b for a, b in zip(normal, p)) == offset)
        result.append(Facet(normal, offset, on))
    result.sort(key=lambda f: f.points)
    return result


def lower_hull(points: Sequence[Sequence]) -> List[LowerFacet]:
    """Lower facets of points in R^{d+1} (last coordinate is the lift), d <= 4."""
    if not points:
        raise DegenerateLift("no points")
    n = len(points[0])
    d = n - 1
    if d < 1 or d > MAX_AMBIENT - 1:
        raise InvalidInput(f"base dimension {d} unsupported")
    r_lift = affine_rank(points)
    r_base = affine_rank([p[:-1] for p in points])
    if r_base < d:
        raise DegenerateLift("projected points are not full-dimensional")
    ipts, den = _integerize(points)
    if r_lift == d:
        # every point lies on one non-vertical hyperplane
        idx = _initial_simplex([p[:-1] for p in ipts])
        rows = [[Fraction(x) for x in points[i][:-1]] + [Fraction(1)] for i in idx]
        rhs = [Fraction(points[i][-1]) for i in idx]
        from .linalg import solve
        sol = solve(rows, rhs)
        return [LowerFacet(tuple(sol[:-1]), sol[-1], tuple(range(len(points))))]
    out = []
    for f in convex_hull(points):
        a_last = f.normal[-1]
        if a_last >= 0:
            continue
        slope = tuple(Fraction(-a, a_last) for a in f.normal[:-1])
        const = Fraction(f.offset, den * a_last)
        out.append(LowerFacet(slope, const, f.points))
    return out


def brute_force_hull(points: Sequence[Sequence]) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Facet oracle: every hyperplane through n affinely independent points with
    all points on one side.  Returns sorted (points-on-facet, primitive outer
    normal).  Exponential; for tests only."""
    ipts, _ = _integerize(points)
    n = len(ipts[0])
    seen = {}
    for combo in combinations(range(len(ipts)), n):
        try:
            normal, offset = _normal_of([ipts[i] for i in combo])
        except InvalidInput:
            continue
        vals = [sum(a * b for a, b in zip(normal, p)) - offset for p in ipts]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            normal = [-a for a in normal]
        else:
            continue
        on = tuple(i for i, v in enumerate(vals) if v == 0)
        seen[on] = tuple(normal)
    return sorted(seen.items())
