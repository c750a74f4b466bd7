"""Rational polyhedral cones: double description and facet enumeration."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import ConeNotPointed, InvalidInput
from .linalg import dot, inverse, matmul, nullspace, primitive, rank, transpose

IntVec = Tuple[int, ...]


def _prim(v: Sequence) -> IntVec:
    return tuple(primitive(v, sign_normalize=False))


def _prim_line(v: Sequence) -> IntVec:
    return tuple(primitive(v, sign_normalize=True))


def extreme_rays(inequalities: Sequence[Sequence], dim: Optional[int] = None,
                 equations: Sequence[Sequence] = (), split_lineality: bool = False):
    """Extreme rays of {x : a.x >= 0 for a in inequalities, e.x = 0 for e in equations}.

    Rays come back primitive and lexicographically sorted.  With
    ``split_lineality`` a non-pointed cone returns ``(rays, lineality_basis)``
    where the rays describe the pointed part inside the orthogonal complement
    of the lineality space; otherwise a non-pointed cone raises ConeNotPointed.
    """
    rows = [list(a) for a in inequalities]
    for e in equations:
        rows.append(list(e))
        rows.append([-x for x in e])
    if dim is None:
        if not rows:
            raise InvalidInput("dimension needed for an empty constraint list")
        dim = len(rows[0])
    lineality = nullspace(rows, dim) if rows else [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    if lineality:
        if not split_lineality:
            raise ConeNotPointed(f"lineality space of dimension {len(lineality)}")
        lin = [list(_prim_line(v)) for v in lineality]
        rays = _dd(rows + [list(v) for v in lin] + [[-x for x in v] for v in lin], dim)
        return rays, [tuple(v) for v in lin]
    rays = _dd(rows, dim)
    return (rays, []) if split_lineality else rays


def _dd(rows: List[List], d: int) -> List[IntVec]:
    uniq = sorted({_prim(r) for r in rows if any(x != 0 for x in r)})
    # initial simplicial cone from d independent constraints, lexicographic greedy
    basis: List[IntVec] = []
    for r in uniq:
        if rank([list(b) for b in basis] + [list(r)]) == len(basis) + 1:
            basis.append(r)
            if len(basis) == d:
                break
    if len(basis) < d:
        raise ConeNotPointed("constraints do not have full rank")
    inv = inverse([list(b) for b in basis])
    rays = [_prim([inv[i][j] for i in range(d)]) for j in range(d)]
    processed: List[IntVec] = list(basis)
    tight = [frozenset(k for k in range(d) if k != j) for j in range(d)]
    for a in uniq:
        if a in basis:
            continue
        k_new = len(processed)
        processed.append(a)
        vals = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in pos] + [rays[i] for i in zero]
        new_tight = [tight[i] for i in pos] + [tight[i] | {k_new} for i in zero]
        for i in pos:
            for j in neg:
                common = tight[i] & tight[j]
                if len(common) < d - 2:
                    continue
                if any(k != i and k != j and common <= tight[k] for k in range(len(rays))):
                    continue
                r = [vals[i] * y - vals[j] * x for x, y in zip(rays[i], rays[j])]
                new_rays.append(_prim(r))
                new_tight.append(common | {k_new})
        rays, tight = new_rays, new_tight
    return sorted(set(rays))


class PolyhedralCone:
    """Closed rational cone in R^d kept in generator and/or constraint form.

    Constraints are ``equations`` (e.x = 0) and ``inequalities`` (a.x >= 0).
    Whichever representation is missing is computed on first use.
    """

    def __init__(self, dim: int, generators: Optional[Sequence[Sequence]] = None,
                 inequalities: Optional[Sequence[Sequence]] = None,
                 equations: Optional[Sequence[Sequence]] = None):
        if generators is None and inequalities is None and equations is None:
            raise InvalidInput("cone needs generators or constraints")
        self.dim = dim
        self._gens = None if generators is None else [tuple(Fraction(x) for x in g) for g in generators]
        if inequalities is None and generators is None:
            inequalities = []
        self._ineq = None if inequalities is None else [tuple(a) for a in inequalities]
        self._eq = None if equations is None and inequalities is None else [tuple(e) for e in (equations or [])]
        self._rays: Optional[List[IntVec]] = None

    @property
    def generators(self) -> List[Tuple[Fraction, ...]]:
        if self._gens is None:
            self._gens = [tuple(Fraction(x) for x in r) for r in self.rays()]
        return self._gens

    def rays(self) -> List[IntVec]:
        """Irredundant primitive extreme rays (sorted)."""
        if self._rays is None:
            if self._ineq is not None:
                self._rays = extreme_rays(self._ineq, self.dim, self._eq or [])
            else:
                eqs, ineqs = facets_of_generators(self._gens, self.dim)
                self._rays = extreme_rays(ineqs, self.dim, eqs)
        return self._rays

    def constraints(self) -> Tuple[List[IntVec], List[IntVec]]:
        """(equations, inequalities) with irredundant facet inequalities."""
        if self._ineq is None:
            self._eq, self._ineq = facets_of_generators(self._gens, self.dim)
        return list(self._eq or []), list(self._ineq)

    def contains(self, x: Sequence) -> bool:
        eqs, ineqs = self.constraints()
        return all(dot(e, x) == 0 for e in eqs) and all(dot(a, x) >= 0 for a in ineqs)

    def linear_dimension(self) -> int:
        gens = self.generators
        return rank([list(g) for g in gens]) if gens else 0

    def same_set(self, other: "PolyhedralCone") -> bool:
        return all(other.contains(g) for g in self.rays()) and all(self.contains(g) for g in other.rays())

    def __repr__(self) -> str:
        return f"PolyhedralCone(dim={self.dim}, rays={len(self.rays())})"


def facets_of_generators(gens: Sequence[Sequence], dim: int) -> Tuple[List[IntVec], List[IntVec]]:
    """Equations of the span and facet inequalities of cone(gens)."""
    gens = [list(g) for g in gens if any(x != 0 for x in g)]
    if not gens:
        return [tuple(int(i == j) for j in range(dim)) for i in range(dim)], []
    eqs = [_prim_line(v) for v in nullspace(gens, dim)]
    k = rank(gens)
    # basis of the span taken from the generators themselves
    basis: List[List] = []
    for g in gens:
        if rank(basis + [g]) == len(basis) + 1:
            basis.append(g)
    Bm = transpose(basis)  # d x k
    left = matmul(inverse(matmul(transpose(Bm), Bm)), transpose(Bm))  # k x d
    coords = [[dot(row, g) for row in left] for g in gens]
    if k == 1:
        dual_rays = [(1,)] if all(c[0] > 0 for c in coords) else [(-1,)]
    else:
        dual_rays = extreme_rays(coords, k)
    ineqs = set()
    for y in dual_rays:
        f = [sum(Fraction(y[i]) * left[i][j] for i in range(k)) for j in range(dim)]
        ineqs.add(_prim(f))
    return sorted(set(eqs)), sorted(ineqs)
