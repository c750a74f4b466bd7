"""Cycle bases, period matrices and secondary cones of metric graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import InternalError, InvalidInput, NotConnected, NotPSD
from .exact.cones import PolyhedralCone
from .exact.linalg import (
    det, is_positive_definite, is_symmetric, ldl_psd, rank_one, saturated_kernel_basis, solve,
    sym_dim, sym_to_vec,
)
from .exact.numbers import fmt_rational, to_rational
from .metric_graph import WeightedMetricGraph


@dataclass(frozen=True)
class CycleBasis:
    """Fundamental cycles of a spanning tree, one row per non-tree edge.

    ``edge_ids`` fixes the column order and ``orientation`` maps each edge id
    to its (tail, head) used for signs.
    """

    graph: WeightedMetricGraph
    edge_ids: Tuple[int, ...]
    orientation: Mapping[int, Tuple[int, int]]
    tree: FrozenSet[int]
    non_tree: Tuple[int, ...]
    rows: Tuple[Tuple[int, ...], ...]

    @property
    def genus(self) -> int:
        return len(self.rows)

    @property
    def B(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def column(self, eid: int) -> Tuple[int, ...]:
        j = self.edge_ids.index(eid)
        return tuple(r[j] for r in self.rows)

    def columns(self) -> List[Tuple[int, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(len(self.edge_ids))]

    def lengths(self) -> List[Fraction]:
        return [self.graph.edge(e).length for e in self.edge_ids]

    def tree_path(self, a: int, b: int) -> Dict[int, int]:
        """Signed edge multiset of the tree path a -> b."""
        return _tree_path(self._parents(), a, b, self.orientation)

    def _parents(self):
        return _tree_parents(self.graph, self.tree)


def _bfs_tree(graph: WeightedMetricGraph) -> FrozenSet[int]:
    vs = graph.vertices
    root = vs[0]
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in sorted(graph.incident(v), key=lambda e: e.id):
            u = e.other(v)
            if u not in seen:
                seen.add(u)
                tree.add(e.id)
                queue.append(u)
    if len(seen) != len(vs):
        raise NotConnected("graph is disconnected")
    return frozenset(tree)


def _tree_parents(graph: WeightedMetricGraph, tree: FrozenSet[int]):
    """parent[v] = (parent vertex, edge id), depth[v]; rooted at the lowest id."""
    root = graph.vertices[0]
    parent: Dict[int, Tuple[int, int]] = {}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in sorted(graph.incident(v), key=lambda e: e.id):
            if e.id not in tree:
                continue
            u = e.other(v)
            if u not in depth:
                depth[u] = depth[v] + 1
                parent[u] = (v, e.id)
                queue.append(u)
    return parent, depth


def _tree_path(parents, a: int, b: int, orientation) -> Dict[int, int]:
    parent, depth = parents
    up_a: List[Tuple[int, int, int]] = []  # (from, to, edge) walking from a upward
    up_b: List[Tuple[int, int, int]] = []
    x, y = a, b
    while depth[x] > depth[y]:
        p, e = parent[x]
        up_a.append((x, p, e))
        x = p
    while depth[y] > depth[x]:
        p, e = parent[y]
        up_b.append((y, p, e))
        y = p
    while x != y:
        p, e = parent[x]
        up_a.append((x, p, e))
        x = p
        q, f = parent[y]
        up_b.append((y, q, f))
        y = q
    steps = up_a + [(t, s, e) for s, t, e in reversed(up_b)]
    out: Dict[int, int] = {}
    for s, t, e in steps:
        sign = 1 if orientation[e] == (s, t) else -1
        out[e] = out.get(e, 0) + sign
    return {e: c for e, c in out.items() if c != 0}


def cycle_basis(graph: WeightedMetricGraph, tree: Optional[Iterable[int]] = None,
                orientation: str = "canonical", edge_order: Optional[Sequence[int]] = None) -> CycleBasis:
    """Fundamental cycle basis.

    By default the tree is the BFS tree from the lowest vertex (edges explored
    by id), edges are oriented from lower to higher endpoint id and columns
    follow edge ids.  ``orientation="stored"`` uses each edge's own src -> dst.
    """
    if not graph.is_connected():
        raise NotConnected("graph is disconnected")
    if tree is None:
        tree_set = _bfs_tree(graph)
    else:
        tree_set = frozenset(tree)
        if len(tree_set) != len(graph.vertices) - 1:
            raise InvalidInput("given tree has the wrong number of edges")
        probe = WeightedMetricGraph(graph.weights, [e for e in graph.edges if e.id in tree_set])
        if not probe.is_connected():
            raise InvalidInput("given edge set is not a spanning tree")
    if orientation == "canonical":
        orient = {e.id: (min(e.src, e.dst), max(e.src, e.dst)) for e in graph.edges}
    elif orientation == "stored":
        orient = {e.id: (e.src, e.dst) for e in graph.edges}
    else:
        raise InvalidInput(f"unknown orientation convention {orientation!r}")
    ids = tuple(edge_order) if edge_order is not None else tuple(e.id for e in graph.edges)
    if sorted(ids) != sorted(e.id for e in graph.edges):
        raise InvalidInput("edge_order must list every edge once")
    col = {e: j for j, e in enumerate(ids)}
    parents = _tree_parents(graph, tree_set)
    non_tree = tuple(e for e in ids if e not in tree_set)
    rows = []
    for eid in non_tree:
        row = [0] * len(ids)
        row[col[eid]] = 1
        tail, head = orient[eid]
        if tail != head:
            for f, c in _tree_path(parents, head, tail, orient).items():
                row[col[f]] += c
        rows.append(tuple(row))
    return CycleBasis(graph, ids, orient, tree_set, non_tree, tuple(rows))


class QuadraticForm:
    """Symmetric PSD rational matrix with cached rank and integer kernel."""

    __slots__ = ("_m", "_rank", "_kernel")

    def __init__(self, matrix: Sequence[Sequence], check: bool = True):
        m = tuple(tuple(to_rational(x) if not isinstance(x, Fraction) else x for x in row) for row in matrix)
        if any(len(r) != len(m) for r in m):
            raise InvalidInput("matrix must be square")
        if not is_symmetric(m):
            raise InvalidInput("matrix must be symmetric")
        self._m = m
        self._rank: Optional[int] = None
        self._kernel = None
        if check:
            ok, r = ldl_psd(m)
            if not ok:
                raise NotPSD("matrix is not positive semidefinite")
            self._rank = r

    @property
    def g(self) -> int:
        return len(self._m)

    @property
    def matrix(self) -> List[List[Fraction]]:
        return [list(r) for r in self._m]

    def __getitem__(self, ij):
        i, j = ij
        return self._m[i][j]

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = ldl_psd(self._m)[1]
        return self._rank

    @property
    def kernel_basis(self) -> List[List[int]]:
        if self._kernel is None:
            self._kernel = saturated_kernel_basis(self._m) if self.g else []
        return [list(v) for v in self._kernel]

    def is_positive_definite(self) -> bool:
        return self.g == 0 or is_positive_definite(self._m)

    def to_json(self) -> dict:
        return {"g": self.g, "entries": [[fmt_rational(x) for x in r] for r in self._m]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "QuadraticForm":
        try:
            entries = obj["entries"]
            q = cls([[to_rational(x) for x in r] for r in entries])
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed matrix JSON: {exc}") from None
        if "g" in obj and int(obj["g"]) != q.g:
            raise InvalidInput("declared g does not match the matrix size")
        return q

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticForm) and self._m == other._m

    def __hash__(self) -> int:
        return hash(self._m)

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(fmt_rational(x) for x in r) for r in self._m)
        return f"QuadraticForm([{rows}])"


def period_matrix(graph: WeightedMetricGraph, basis: Optional[CycleBasis] = None) -> QuadraticForm:
    """B D B^T, padded with zero rows and columns for the total vertex weight."""
    if basis is None:
        basis = cycle_basis(graph)
    B = basis.B
    D = basis.lengths()
    h = len(B)
    g = h + graph.total_weight
    Q = [[Fraction(0)] * g for _ in range(g)]
    for i in range(h):
        for j in range(i, h):
            s = sum((B[i][k] * B[j][k] * D[k] for k in range(len(D)) if B[i][k] and B[j][k]), Fraction(0))
            Q[i][j] = Q[j][i] = s
    return QuadraticForm(Q)


def basis_change(source: CycleBasis, target: CycleBasis) -> List[List[int]]:
    """Unimodular U with period_matrix(target) = U^T period_matrix(source) U.

    Both bases must belong to the same graph; columns and orientations are
    matched through edge ids.
    """
    if source.graph != target.graph:
        raise InvalidInput("cycle bases of different graphs")
    ids = sorted(source.edge_ids)

    def signed(basis: CycleBasis) -> List[List[int]]:
        out = []
        for row in basis.rows:
            by_id = dict(zip(basis.edge_ids, row))
            vec = []
            for eid in ids:
                e = basis.graph.edge(eid)
                sign = 1 if basis.orientation[eid] == (e.src, e.dst) else -1
                vec.append(sign * by_id[eid])
            out.append(vec)
        return out

    S, T = signed(source), signed(target)
    St = [list(col) for col in zip(*S)]
    coeffs = []
    for row in T:
        x = solve(St, row)
        if x is None or any(Fraction(a).denominator != 1 for a in x):
            raise InternalError("cycle bases span different lattices")
        coeffs.append([int(a) for a in x])
    U = [list(col) for col in zip(*coeffs)]
    if abs(det(U)) != 1:
        raise InternalError("change of cycle basis is not unimodular")
    return U


def graph_vectors(graph: WeightedMetricGraph, basis: Optional[CycleBasis] = None) -> List[Tuple[int, Tuple[int, ...]]]:
    """(edge id, column of B) for edges with a nonzero column."""
    if basis is None:
        basis = cycle_basis(graph)
    return [(e, c) for e, c in zip(basis.edge_ids, basis.columns()) if any(c)]


def secondary_cone_of_graph(graph: WeightedMetricGraph, basis: Optional[CycleBasis] = None) -> PolyhedralCone:
    """Cone in Sym^2 spanned by v v^T over the nonzero columns v of B (bridges drop out)."""
    if basis is None:
        basis = cycle_basis(graph)
    h = basis.genus
    gens = [sym_to_vec(rank_one(v)) for _, v in graph_vectors(graph, basis)]
    if not gens:
        return PolyhedralCone(sym_dim(h), equations=[[int(i == j) for j in range(sym_dim(h))]
                                                    for i in range(sym_dim(h))])
    return PolyhedralCone(sym_dim(h), generators=gens)
