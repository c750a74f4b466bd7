"""Blueprint for a nodal union of plane curves with a prescribed stable dual graph."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, Optional, Tuple

from .errors import NotConnected, NotStableGraph, NotTriangularWeight, TooManyEdges
from .metric_graph import WeightedMetricGraph


def degree_for_weight(w: int) -> Optional[int]:
    """Smallest d >= 1 with binom(d-1, 2) = w, or None."""
    d = 1
    while comb(d - 1, 2) < w:
        d += 1
    return d if comb(d - 1, 2) == w else None


@dataclass(frozen=True)
class PairBudget:
    v: int
    w: int
    budget: int
    edges: int

    @property
    def blowups(self) -> int:
        return self.budget - self.edges


@dataclass(frozen=True)
class Blueprint:
    """Plane curves of degree d(v), one per vertex, in general position.  For
    each pair, ``blowups`` of their d(v)d(w) intersection points are blown up
    and the rest become the nodes dual to the edges."""

    degrees: Dict[int, int]
    pairs: Tuple[PairBudget, ...]

    @property
    def total_blowups(self) -> int:
        return sum(p.blowups for p in self.pairs)

    def arithmetic_genus(self) -> int:
        """Sum of component genera plus the first Betti number of the dual graph."""
        nodes = sum(p.edges for p in self.pairs)
        return sum(comb(d - 1, 2) for d in self.degrees.values()) + nodes - len(self.degrees) + 1

    def to_json(self) -> dict:
        return {
            "degrees": [{"vertex": v, "degree": d} for v, d in sorted(self.degrees.items())],
            "pairs": [{"v": p.v, "w": p.w, "intersections": p.budget, "edges": p.edges, "blowups": p.blowups}
                      for p in self.pairs],
            "total_blowups": self.total_blowups,
            "ambient": {"surface": f"blow-up of P^2 at {self.total_blowups} points",
                        "embedding": "P^2 x P^1 in P^5 (Segre)"},
        }


def realization_blueprint(G: WeightedMetricGraph) -> Blueprint:
    if not G.is_connected():
        raise NotConnected("graph is disconnected")
    for v in G.vertices:
        if G.weight(v) == 0 and G.degree(v) < 3:
            raise NotStableGraph(f"weight-zero vertex {v} has valence {G.degree(v)}", vertex=v)
    for e in G.edges:
        if e.is_loop:
            # a node on a single smooth component cannot be produced
            raise TooManyEdges(f"loop at vertex {e.src}", v=e.src, w=e.src)
    deg: Dict[int, int] = {}
    for v in G.vertices:
        d = degree_for_weight(G.weight(v))
        if d is None:
            raise NotTriangularWeight(f"weight {G.weight(v)} at vertex {v} is not binom(d-1, 2)", vertex=v)
        deg[v] = d
    count: Dict[Tuple[int, int], int] = {}
    for e in G.edges:
        key = (min(e.src, e.dst), max(e.src, e.dst))
        count[key] = count.get(key, 0) + 1
    # weight-zero components may be conics instead of lines
    while True:
        bad = [(a, b) for (a, b), m in sorted(count.items()) if m > deg[a] * deg[b]]
        if not bad:
            break
        a, b = bad[0]
        bump = [x for x in (a, b) if G.weight(x) == 0 and deg[x] == 1]
        if not bump:
            raise TooManyEdges(f"{count[(a, b)]} edges between {a} and {b} exceed {deg[a] * deg[b]}", v=a, w=b)
        deg[bump[0]] = 2
    pairs = tuple(PairBudget(a, b, deg[a] * deg[b], count.get((a, b), 0))
                  for a, b in combinations(G.vertices, 2))
    return Blueprint(deg, pairs)
