"""Marked points on the projective line, their tree metric, and neighbor joining."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .errors import CoincidentMarkedPoints, InvalidInput, NotTreeMetric, TooFewLeaves
from .exact.numbers import (
    INF, Explicit, Valuation, fmt_rational, to_rational, valuate, valuation_from_json,
    valuation_to_json,
)


@dataclass(frozen=True)
class MarkedPoints:
    """Points (a_i : b_i) on P^1 with a valuation on the ground field.

    With an explicit valuation the Plucker coordinate p_ij is looked up under
    the key ``"i,j"`` (1-based, i < j).
    """

    points: Tuple[Tuple[Fraction, Fraction], ...]
    valuation: Valuation

    def __post_init__(self):
        pts = tuple((to_rational(a), to_rational(b)) for a, b in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 4:
            raise TooFewLeaves("need at least four marked points", n=len(pts))
        if len(pts) % 2:
            raise InvalidInput("the number of marked points must be even", n=len(pts))
        for a, b in pts:
            if a == 0 and b == 0:
                raise InvalidInput("(0 : 0) is not a projective point")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def genus(self) -> int:
        return self.n // 2 - 1

    @classmethod
    def from_json(cls, obj: Mapping) -> "MarkedPoints":
        try:
            pts = [(p[0], p[1]) for p in obj["points"]]
            val = valuation_from_json(obj["valuation"])
        except (KeyError, TypeError, IndexError) as exc:
            raise InvalidInput(f"malformed marked-points JSON: {exc}") from None
        return cls(tuple(pts), val)

    def to_json(self) -> dict:
        return {"points": [[fmt_rational(a), fmt_rational(b)] for a, b in self.points],
                "valuation": valuation_to_json(self.valuation)}


def plucker_valuations(pts: MarkedPoints) -> List[Fraction]:
    """Valuations of a_i b_j - a_j b_i for i < j in lexicographic order."""
    out = []
    for i, j in combinations(range(pts.n), 2):
        (ai, bi), (aj, bj) = pts.points[i], pts.points[j]
        p = ai * bj - aj * bi
        if p == 0:
            raise CoincidentMarkedPoints(f"points {i + 1} and {j + 1} coincide", i=i + 1, j=j + 1)
        if isinstance(pts.valuation, Explicit):
            v = valuate(f"{i + 1},{j + 1}", pts.valuation)
        else:
            v = valuate(p, pts.valuation)
        if v == INF:
            raise CoincidentMarkedPoints(f"points {i + 1} and {j + 1} have infinite valuation", i=i + 1, j=j + 1)
        out.append(Fraction(v))
    return out


Metric = List[List[Fraction]]


def four_point_violation(D: Sequence[Sequence]) -> Optional[Tuple[int, int, int, int]]:
    """A quadruple where the maximum of the three pair sums is attained once, or None."""
    n = len(D)
    for i, j, k, l in combinations(range(n), 4):
        s = sorted((D[i][j] + D[k][l], D[i][k] + D[j][l], D[i][l] + D[j][k]))
        if s[1] != s[2]:
            return (i, j, k, l)
    return None


def tree_metric(plucker: Sequence, n: int) -> Metric:
    """d_ij = -2 v(p_ij) + c with c = 2 max v + 2."""
    vals = [Fraction(x) for x in plucker]
    if len(vals) != n * (n - 1) // 2:
        raise InvalidInput(f"expected {n * (n - 1) // 2} valuations, got {len(vals)}")
    if n < 4:
        raise TooFewLeaves("need at least four leaves", n=n)
    c = 2 * max(vals) + 2
    D = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in zip(combinations(range(n), 2), vals):
        D[i][j] = D[j][i] = -2 * v + c
    bad = four_point_violation(D)
    if bad is not None:
        raise NotTreeMetric("four-point condition fails", quadruple=[x + 1 for x in bad])
    return D


class PhyloTree:
    """Finite tree with rational internal edge lengths and labeled infinite leaves.

    ``leaves`` maps labels 1..n to the vertex each leaf is attached to.
    """

    def __init__(self, vertices: Sequence[int], edges: Sequence[Tuple[int, int, Fraction]],
                 leaves: Mapping[int, int]):
        self.vertices = tuple(sorted(vertices))
        self.edges = tuple((int(u), int(v), Fraction(l)) for u, v, l in edges)
        self.leaves = dict(sorted((int(k), int(v)) for k, v in leaves.items()))
        vs = set(self.vertices)
        if any(u not in vs or v not in vs for u, v, _ in self.edges):
            raise InvalidInput("edge endpoint is not a vertex")
        if any(l <= 0 for _, _, l in self.edges):
            raise InvalidInput("internal edge lengths must be positive")
        if any(v not in vs for v in self.leaves.values()):
            raise InvalidInput("leaf attached to an unknown vertex")
        if sorted(self.leaves) != list(range(1, len(self.leaves) + 1)):
            raise InvalidInput("leaf labels must be 1..n")
        if len(self.edges) != len(self.vertices) - 1 or not self._connected():
            raise InvalidInput("edges do not form a tree")
        if len(self.vertices) > 1:
            for v in self.vertices:
                if self.degree(v) < 3:
                    raise InvalidInput(f"vertex {v} has degree {self.degree(v)} < 3")

    def _connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for u, _ in self.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.leaves)

    def neighbors(self, v: int) -> List[Tuple[int, Fraction]]:
        out = []
        for a, b, l in self.edges:
            if a == v:
                out.append((b, l))
            elif b == v:
                out.append((a, l))
        return out

    def leaf_count(self, v: int) -> int:
        return sum(1 for x in self.leaves.values() if x == v)

    def degree(self, v: int) -> int:
        return len(self.neighbors(v)) + self.leaf_count(v)

    def distances_from(self, v: int) -> Dict[int, Fraction]:
        dist = {v: Fraction(0)}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y, l in self.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + l
                    queue.append(y)
        return dist

    def leaf_distance(self, i: int, j: int) -> Fraction:
        """Distance between the attachment points of leaves i and j."""
        return self.distances_from(self.leaves[i])[self.leaves[j]]

    def metric(self, leaf_lengths: Optional[Mapping[int, Fraction]] = None) -> Metric:
        """Leaf-to-leaf distances with the given leaf edge lengths (default 1)."""
        n = self.n
        ll = {k: Fraction(1) for k in self.leaves}
        if leaf_lengths:
            ll.update({k: Fraction(v) for k, v in leaf_lengths.items()})
        D = [[Fraction(0)] * n for _ in range(n)]
        for i, j in combinations(range(1, n + 1), 2):
            D[i - 1][j - 1] = D[j - 1][i - 1] = self.leaf_distance(i, j) + ll[i] + ll[j]
        return D

    def splits(self) -> Dict[FrozenSet[int], Fraction]:
        """Internal edge -> leaf bipartition (the side without leaf 1) with its length."""
        out = {}
        for k, (a, b, l) in enumerate(self.edges):
            side = self._side(a, b)
            labels = frozenset(x for x, v in self.leaves.items() if v in side)
            if 1 in labels:
                labels = frozenset(self.leaves) - labels
            out[labels] = l
        return out

    def _side(self, a: int, b: int) -> set:
        """Vertices on b's side of edge (a, b)."""
        seen = {b}
        stack = [b]
        while stack:
            x = stack.pop()
            for y, _ in self.neighbors(x):
                if y not in seen and not (x == b and y == a):
                    seen.add(y)
                    stack.append(y)
        return seen

    def same_tree(self, other: "PhyloTree") -> bool:
        """Label-preserving isomorphism with equal internal lengths."""
        return self.n == other.n and self.splits() == other.splits()

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"src": u, "dst": v, "length": fmt_rational(l)} for u, v, l in self.edges],
            "leaves": [{"label": str(k), "at": v} for k, v in self.leaves.items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PhyloTree":
        try:
            return cls(obj["vertices"],
                       [(e["src"], e["dst"], to_rational(e["length"])) for e in obj.get("edges", [])],
                       {int(l["label"]): int(l["at"]) for l in obj["leaves"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed tree JSON: {exc}") from None

    def __repr__(self) -> str:
        return f"PhyloTree(n={self.n}, internal_vertices={len(self.vertices)}, internal_edges={len(self.edges)})"


def neighbor_joining(D: Sequence[Sequence]) -> PhyloTree:
    """Exact neighbor joining; zero-length internal edges are contracted and
    leaf edge lengths discarded.  Ties go to the lexicographically smallest pair."""
    n = len(D)
    if n < 4:
        raise TooFewLeaves("need at least four leaves", n=n)
    D = [[Fraction(x) for x in row] for row in D]
    bad = four_point_violation(D)
    if bad is not None:
        raise NotTreeMetric("four-point condition fails", quadruple=[x + 1 for x in bad])
    dist: Dict[Tuple[int, int], Fraction] = {}
    for i, j in combinations(range(n), 2):
        dist[(i, j)] = dist[(j, i)] = D[i][j]
    active = list(range(n))
    edges: List[Tuple[int, int, Fraction]] = []
    nxt = n
    while len(active) > 3:
        r = len(active)
        R = {i: sum(dist[(i, k)] for k in active if k != i) for i in active}
        best = None
        for a, b in combinations(active, 2):
            q = (r - 2) * dist[(a, b)] - R[a] - R[b]
            if best is None or q < best[0]:
                best = (q, a, b)
        _, a, b = best
        u = nxt
        nxt += 1
        la = dist[(a, b)] / 2 + (R[a] - R[b]) / (2 * (r - 2))
        lb = dist[(a, b)] - la
        edges += [(a, u, la), (b, u, lb)]
        for k in active:
            if k not in (a, b):
                dist[(k, u)] = dist[(u, k)] = (dist[(a, k)] + dist[(b, k)] - dist[(a, b)]) / 2
        active = [k for k in active if k not in (a, b)] + [u]
    a, b, c = active
    u = nxt
    la = (dist[(a, b)] + dist[(a, c)] - dist[(b, c)]) / 2
    lb = dist[(a, b)] - la
    lc = dist[(a, c)] - la
    edges += [(a, u, la), (b, u, lb), (c, u, lc)]
    return _assemble(n, edges, u)


def _assemble(n: int, edges: List[Tuple[int, int, Fraction]], root: int) -> PhyloTree:
    """Drop leaf edges, contract zero internal edges, relabel by BFS from ``root``."""
    attach = {}
    internal = []
    for a, b, l in edges:
        if a < n:
            attach[a] = b
        elif b < n:
            attach[b] = a
        else:
            if l < 0:
                raise NotTreeMetric("negative internal branch length")
            internal.append((a, b, l))
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for a, b, l in internal:
        if l == 0:
            parent[find(a)] = find(b)
    kept = [(find(a), find(b), l) for a, b, l in internal if l != 0]
    adj: Dict[int, List[Tuple[int, Fraction]]] = {}
    for a, b, l in kept:
        adj.setdefault(a, []).append((b, l))
        adj.setdefault(b, []).append((a, l))
    start = find(root)
    order = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y, _ in sorted(adj.get(x, []), key=lambda t: (t[0], t[1])):
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    new = {v: i for i, v in enumerate(order)}
    tree_edges = sorted((min(new[a], new[b]), max(new[a], new[b]), l) for a, b, l in kept)
    leaves = {i + 1: new[find(attach[i])] for i in range(n)}
    return PhyloTree(range(len(order)), tree_edges, leaves)
