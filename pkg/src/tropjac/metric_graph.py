"""Weighted metric graphs: genus, minimal skeleton, canonical loopless model."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import InvalidInput, NotConnected, UnsupportedGenus
from .exact.numbers import fmt_rational, to_rational


@dataclass(frozen=True)
class Edge:
    id: int
    src: int
    dst: int
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst

    def other(self, v: int) -> int:
        return self.dst if v == self.src else self.src


@dataclass(frozen=True)
class InfiniteEdge:
    at: int
    label: str


class WeightedMetricGraph:
    """A finite multigraph with vertex weights, rational edge lengths and rays.

    Instances are immutable; operations return new graphs.
    """

    __slots__ = ("_weights", "_edges", "_infinite", "_adj")

    def __init__(self, weights: Mapping[int, int], edges: Iterable[Edge] = (),
                 infinite_edges: Iterable[InfiniteEdge] = ()):
        w = {int(v): int(x) for v, x in weights.items()}
        if any(x < 0 for x in w.values()):
            raise InvalidInput("vertex weights must be nonnegative")
        es = tuple(sorted(edges, key=lambda e: e.id))
        if len({e.id for e in es}) != len(es):
            raise InvalidInput("duplicate edge ids")
        for e in es:
            if e.src not in w or e.dst not in w:
                raise InvalidInput(f"edge {e.id} has an unknown endpoint")
            if not e.length > 0:
                raise InvalidInput(f"edge {e.id} must have positive length")
        inf = tuple(infinite_edges)
        for r in inf:
            if r.at not in w:
                raise InvalidInput(f"infinite edge {r.label} attached to unknown vertex")
        self._weights = w
        self._edges = es
        self._infinite = inf
        adj: Dict[int, List[Edge]] = {v: [] for v in w}
        for e in es:
            adj[e.src].append(e)
            if not e.is_loop:
                adj[e.dst].append(e)
        self._adj = adj

    # -- basic accessors -------------------------------------------------
    @property
    def vertices(self) -> List[int]:
        return sorted(self._weights)

    @property
    def weights(self) -> Dict[int, int]:
        return dict(self._weights)

    def weight(self, v: int) -> int:
        return self._weights[v]

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def infinite_edges(self) -> Tuple[InfiniteEdge, ...]:
        return self._infinite

    def edge(self, eid: int) -> Edge:
        for e in self._edges:
            if e.id == eid:
                return e
        raise InvalidInput(f"no edge with id {eid}")

    def incident(self, v: int) -> List[Edge]:
        """Finite edges at ``v`` (a loop is listed once)."""
        return list(self._adj[v])

    def degree(self, v: int, with_infinite: bool = False) -> int:
        d = sum(2 if e.is_loop else 1 for e in self._adj[v])
        if with_infinite:
            d += sum(1 for r in self._infinite if r.at == v)
        return d

    @property
    def total_weight(self) -> int:
        return sum(self._weights.values())

    def is_connected(self) -> bool:
        vs = self.vertices
        if not vs:
            return False
        seen = {vs[0]}
        stack = [vs[0]]
        while stack:
            v = stack.pop()
            for e in self._adj[v]:
                u = e.other(v)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(vs)

    def first_betti(self) -> int:
        if not self.is_connected():
            raise NotConnected("graph is disconnected")
        return len(self._edges) - len(self._weights) + 1

    def bridges(self) -> List[int]:
        """Ids of finite edges whose removal disconnects the graph."""
        out = []
        for e in self._edges:
            if e.is_loop:
                continue
            rest = [f for f in self._edges if f.id != e.id]
            if not WeightedMetricGraph(self._weights, rest).is_connected():
                out.append(e.id)
        return out

    def with_lengths(self, lengths: Mapping[int, Fraction]) -> "WeightedMetricGraph":
        return WeightedMetricGraph(
            self._weights,
            [Edge(e.id, e.src, e.dst, Fraction(lengths.get(e.id, e.length))) for e in self._edges],
            self._infinite)

    def with_weights(self, weights: Mapping[int, int]) -> "WeightedMetricGraph":
        w = dict(self._weights)
        w.update(weights)
        return WeightedMetricGraph(w, self._edges, self._infinite)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "weight": self._weights[v]} for v in self.vertices],
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst, "length": fmt_rational(e.length)}
                      for e in self._edges],
            "infinite_edges": [{"at": r.at, "label": r.label} for r in self._infinite],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "WeightedMetricGraph":
        try:
            weights = {int(v["id"]): int(v.get("weight", 0)) for v in obj["vertices"]}
            edges = [Edge(int(e["id"]), int(e["src"]), int(e["dst"]), to_rational(e["length"]))
                     for e in obj.get("edges", [])]
            inf = [InfiniteEdge(int(r["at"]), str(r.get("label", ""))) for r in obj.get("infinite_edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed graph JSON: {exc}") from None
        return cls(weights, edges, inf)

    def to_dot(self) -> str:
        lines = ["graph G {"]
        for v in self.vertices:
            lines.append(f'  {v} [label="{v}(w={self._weights[v]})"];')
        for e in self._edges:
            lines.append(f'  {e.src} -- {e.dst} [label="{fmt_rational(e.length)}"];')
        for k, r in enumerate(self._infinite):
            lines.append(f'  inf{k} [shape=point, label=""];')
            lines.append(f'  {r.at} -- inf{k} [label="{r.label}", style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeightedMetricGraph) and self._weights == other._weights
                and self._edges == other._edges and self._infinite == other._infinite)

    def __hash__(self) -> int:
        return hash((tuple(sorted(self._weights.items())), self._edges, self._infinite))

    def __repr__(self) -> str:
        return (f"WeightedMetricGraph(V={len(self._weights)}, E={len(self._edges)}, "
                f"weight={self.total_weight}, rays={len(self._infinite)})")


def genus(graph: WeightedMetricGraph) -> int:
    """Total weight plus first Betti number; infinite edges do not count."""
    return graph.total_weight + graph.first_betti()


def renumber(graph: WeightedMetricGraph) -> WeightedMetricGraph:
    """Relabel vertices in BFS order from the lowest id (edges explored by id),
    then edges by (new endpoints, old id)."""
    vs = graph.vertices
    if not vs:
        return graph
    order: List[int] = []
    seen = set()
    for root in vs:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for e in sorted(graph.incident(v), key=lambda e: e.id):
                u = e.other(v)
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    new = {v: i for i, v in enumerate(order)}
    keyed = sorted(graph.edges, key=lambda e: (min(new[e.src], new[e.dst]), max(new[e.src], new[e.dst]), e.id))
    edges = []
    for i, e in enumerate(keyed):
        a, b = new[e.src], new[e.dst]
        edges.append(Edge(i, min(a, b), max(a, b), e.length))
    inf = sorted((InfiniteEdge(new[r.at], r.label) for r in graph.infinite_edges), key=lambda r: (r.at, r.label))
    return WeightedMetricGraph({new[v]: graph.weight(v) for v in vs}, edges, inf)


def _require_genus_two(graph: WeightedMetricGraph) -> int:
    g = genus(graph)
    if g <= 1:
        raise UnsupportedGenus(f"genus {g} graphs have no canonical minimal model here", genus=g)
    return g


def _suppress_degree_two(weights: Dict[int, int], edges: Dict[int, Edge],
                         infinite: List[InfiniteEdge]) -> None:
    """Merge edges through weight-0 vertices of valence 2 (in place)."""
    changed = True
    while changed:
        changed = False
        for v in sorted(weights):
            if weights[v] != 0:
                continue
            inc = [e for e in edges.values() if v in (e.src, e.dst)]
            rays = [r for r in infinite if r.at == v]
            val = sum(2 if e.is_loop else 1 for e in inc) + len(rays)
            if val != 2 or any(e.is_loop for e in inc):
                continue
            if len(inc) == 2:
                e1, e2 = sorted(inc, key=lambda e: e.id)
                a, b = e1.other(v), e2.other(v)
                del edges[e1.id], edges[e2.id]
                edges[e1.id] = Edge(e1.id, a, b, e1.length + e2.length)
            elif len(inc) == 1 and len(rays) == 1:
                e = inc[0]
                del edges[e.id]
                infinite.remove(rays[0])
                infinite.append(InfiniteEdge(e.other(v), rays[0].label))
            else:
                continue
            del weights[v]
            changed = True
            break


def minimal_skeleton(graph: WeightedMetricGraph) -> WeightedMetricGraph:
    """Drop rays and weight-0 leaves, suppress weight-0 valence-2 vertices."""
    _require_genus_two(graph)
    return core(graph)


def core(graph: WeightedMetricGraph) -> WeightedMetricGraph:
    """Same reduction as :func:`minimal_skeleton` without the genus guard."""
    weights = graph.weights
    edges = {e.id: e for e in graph.edges}
    changed = True
    while changed:
        changed = False
        for v in sorted(weights):
            if weights[v] != 0:
                continue
            inc = [e for e in edges.values() if v in (e.src, e.dst)]
            deg = sum(2 if e.is_loop else 1 for e in inc)
            if deg == 1:
                del edges[inc[0].id]
                del weights[v]
                changed = True
                break
    _suppress_degree_two(weights, edges, [])
    return renumber(WeightedMetricGraph(weights, edges.values()))


def canonical_loopless_model(graph: WeightedMetricGraph) -> WeightedMetricGraph:
    """Vertices: valence != 2, positive weight, or loop midpoints. Rays are kept."""
    _require_genus_two(graph)
    weights = graph.weights
    edges = {e.id: e for e in graph.edges}
    infinite = list(graph.infinite_edges)
    _suppress_degree_two(weights, edges, infinite)
    next_v = max(weights) + 1
    next_e = max(edges, default=-1) + 1
    out: List[Edge] = []
    for e in sorted(edges.values(), key=lambda e: e.id):
        if e.is_loop:
            m = next_v
            next_v += 1
            weights[m] = 0
            half = e.length / 2
            out.append(Edge(e.id, e.src, m, half))
            out.append(Edge(next_e, m, e.src, half))
            next_e += 1
        else:
            out.append(e)
    return WeightedMetricGraph(weights, out, infinite)


def subdivide(graph: WeightedMetricGraph, eid: int, t: Fraction) -> WeightedMetricGraph:
    """Insert a weight-0 vertex on edge ``eid`` at fraction ``t`` from its source."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise InvalidInput("subdivision parameter must lie in (0, 1)")
    e = graph.edge(eid)
    weights = graph.weights
    m = max(weights) + 1
    weights[m] = 0
    nid = max(f.id for f in graph.edges) + 1
    edges = [f for f in graph.edges if f.id != eid]
    edges += [Edge(eid, e.src, m, e.length * t), Edge(nid, m, e.dst, e.length * (1 - t))]
    return WeightedMetricGraph(weights, edges, graph.infinite_edges)


def isomorphism(g1: WeightedMetricGraph, g2: WeightedMetricGraph,
                with_lengths: bool = True) -> Optional[Dict[int, int]]:
    """A vertex bijection g1 -> g2 preserving weights and the multiset of edges
    (with lengths when requested) between every pair, or None.  Backtracking;
    intended for small graphs."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None

    def pair_table(g):
        table: Dict[Tuple[int, int], List] = {}
        for e in g.edges:
            key = (min(e.src, e.dst), max(e.src, e.dst))
            table.setdefault(key, []).append(e.length if with_lengths else 1)
        return {k: sorted(v) for k, v in table.items()}

    t1, t2 = pair_table(g1), pair_table(g2)

    def sig(g, table, v):
        mult = sorted((tuple(ls) for (a, b), ls in table.items() if v in (a, b)), key=repr)
        return (g.weight(v), g.degree(v), tuple(mult))

    s1 = {v: sig(g1, t1, v) for v in g1.vertices}
    s2 = {v: sig(g2, t2, v) for v in g2.vertices}
    if sorted(map(repr, s1.values())) != sorted(map(repr, s2.values())):
        return None
    order = sorted(g1.vertices, key=lambda v: -g1.degree(v))
    mapping: Dict[int, int] = {}
    used = set()

    def ok(v, w):
        if s1[v] != s2[w]:
            return False
        for a, b in mapping.items():
            k1 = (min(v, a), max(v, a))
            k2 = (min(w, b), max(w, b))
            if t1.get(k1, []) != t2.get(k2, []):
                return False
        return t1.get((v, v), []) == t2.get((w, w), [])

    def rec(i):
        if i == len(order):
            return True
        v = order[i]
        for w in g2.vertices:
            if w in used or not ok(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if rec(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if rec(0) else None
