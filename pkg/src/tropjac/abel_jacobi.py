"""Tropical Abel-Jacobi map and the image of effective divisors of degree g-1."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Dict, List, Optional, Sequence, Tuple

from .delaunay import MAX_G, ThetaFunction, voronoi_cell
from .errors import InvalidInput, UnsupportedDimension
from .exact.linalg import inverse, matvec, rank
from .metric_graph import WeightedMetricGraph
from .period_matrix import CycleBasis, cycle_basis

Vec = Tuple[Fraction, ...]


@dataclass(frozen=True, order=True)
class GraphPoint:
    """Point on edge ``edge`` at fraction ``t`` from its stored source."""

    edge: int
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 <= self.t <= 1:
            raise InvalidInput("edge parameter must lie in [0, 1]")

    @classmethod
    def parse(cls, text: str) -> "GraphPoint":
        """Parse ``"edge=2,t=1/3"``."""
        try:
            parts = dict(p.split("=", 1) for p in text.replace(" ", "").split(","))
            return cls(int(parts["edge"]), Fraction(parts.get("t", "0")))
        except (KeyError, ValueError) as exc:
            raise InvalidInput(f"cannot parse graph point {text!r}: {exc}") from None


Divisor = Sequence[Tuple[GraphPoint, int]]


def vertex_point(graph: WeightedMetricGraph, v: int) -> GraphPoint:
    """A GraphPoint representing vertex ``v`` (lowest incident edge id)."""
    for e in graph.edges:
        if e.src == v:
            return GraphPoint(e.id, Fraction(0))
        if e.dst == v:
            return GraphPoint(e.id, Fraction(1))
    raise InvalidInput(f"vertex {v} has no incident edge")


def frac_part(x: Sequence[Fraction]) -> Vec:
    return tuple(Fraction(a) - (Fraction(a).numerator // Fraction(a).denominator) for a in x)


class AbelJacobi:
    """mu(p) = Q^{-1} pi(p) mod Z^g for a fixed graph, cycle basis and base point.

    Coordinates beyond the cycle part (vertex weights) are always zero.
    """

    def __init__(self, graph: WeightedMetricGraph, basis: Optional[CycleBasis] = None,
                 p0: Optional[GraphPoint] = None):
        self.graph = graph
        self.basis = basis if basis is not None else cycle_basis(graph)
        self.h = self.basis.genus
        self.g = self.h + graph.total_weight
        B = self.basis.B
        lengths = self.basis.lengths()
        self._col = {e: j for j, e in enumerate(self.basis.edge_ids)}
        self._len = {e: l for e, l in zip(self.basis.edge_ids, lengths)}
        Q = [[sum((B[i][k] * B[j][k] * lengths[k] for k in range(len(lengths))), Fraction(0))
              for j in range(self.h)] for i in range(self.h)]
        self.Q = Q
        self._Qinv = inverse(Q) if self.h else []
        if p0 is None:
            p0 = vertex_point(graph, graph.vertices[0]) if graph.edges else None
        self.p0 = p0

    # chains are dicts edge id -> coefficient, in the basis orientation
    def _sign(self, eid: int) -> int:
        e = self.graph.edge(eid)
        return 1 if self.basis.orientation[eid] == (e.src, e.dst) else -1

    def chain(self, p: GraphPoint, p0: Optional[GraphPoint] = None) -> Dict[int, Fraction]:
        """A path p0 -> p: back along p0's edge to its source, tree path, then along p's edge."""
        p0 = self.p0 if p0 is None else p0
        e0 = self.graph.edge(p0.edge)
        e1 = self.graph.edge(p.edge)
        out: Dict[int, Fraction] = {}

        def add(eid, c):
            out[eid] = out.get(eid, Fraction(0)) + c

        add(e0.id, -p0.t * self._sign(e0.id))
        for eid, c in self.basis.tree_path(e0.src, e1.src).items():
            add(eid, Fraction(c))
        add(e1.id, p.t * self._sign(e1.id))
        return {e: c for e, c in out.items() if c != 0}

    def pairing(self, chain: Dict[int, Fraction]) -> List[Fraction]:
        """pi_i = <chain, omega_i> with the length-weighted edge inner product."""
        B = self.basis.B
        return [sum((c * B[i][self._col[e]] * self._len[e] for e, c in chain.items()), Fraction(0))
                for i in range(self.h)]

    def lift(self, chain: Dict[int, Fraction]) -> Vec:
        """Q^{-1} pi as a vector in R^g (not reduced mod Z^g)."""
        if not self.h:
            return tuple([Fraction(0)] * self.g)
        v = matvec(self._Qinv, self.pairing(chain))
        return tuple(v) + tuple([Fraction(0)] * (self.g - self.h))

    def point(self, p: GraphPoint, p0: Optional[GraphPoint] = None) -> Vec:
        return frac_part(self.lift(self.chain(p, p0)))

    def divisor(self, D: Divisor) -> Vec:
        total = [Fraction(0)] * self.g
        for p, a in D:
            for i, x in enumerate(self.lift(self.chain(p))):
                total[i] += a * x
        return frac_part(total)

    def edge_direction(self, eid: int) -> Vec:
        """mu(point at t=1) - mu(point at t=0) on edge eid, as a real vector."""
        return self.lift({eid: Fraction(self._sign(eid))})

    def source_lift(self, eid: int) -> Vec:
        return self.lift(self.chain(GraphPoint(eid, Fraction(0))))


def abel_jacobi_point(graph: WeightedMetricGraph, basis: Optional[CycleBasis], p0: GraphPoint,
                      p: GraphPoint) -> Vec:
    return AbelJacobi(graph, basis, p0).point(p)


def abel_jacobi_divisor(graph: WeightedMetricGraph, basis: Optional[CycleBasis], p0: GraphPoint,
                        D: Divisor) -> Vec:
    return AbelJacobi(graph, basis, p0).divisor(D)


@dataclass(frozen=True)
class WCell:
    """Image of divisors supported on ``edges``: base + sum s_k directions[k], s in [0,1]^k."""

    edges: Tuple[int, ...]
    base: Vec
    directions: Tuple[Vec, ...]

    @property
    def dimension(self) -> int:
        return rank([list(d) for d in self.directions]) if self.directions else 0

    def at(self, params: Sequence[Fraction]) -> Vec:
        x = list(self.base)
        for s, d in zip(params, self.directions):
            for i, a in enumerate(d):
                x[i] += s * a
        return tuple(x)

    def to_json(self) -> dict:
        from .exact.numbers import fmt_rational
        return {"edges": list(self.edges), "base": [fmt_rational(x) for x in frac_part(self.base)],
                "directions": [[fmt_rational(x) for x in d] for d in self.directions],
                "dimension": self.dimension}


def w_cells(graph: WeightedMetricGraph, basis: Optional[CycleBasis] = None,
            p0: Optional[GraphPoint] = None) -> List[WCell]:
    """Cells covering W_{g-1}, one per multiset of g-1 edges (lexicographic order)."""
    aj = AbelJacobi(graph, basis, p0)
    g = aj.g
    if g < 1:
        raise InvalidInput("W_{g-1} needs genus at least 1")
    ids = sorted(e.id for e in graph.edges)
    out = []
    for combo in combinations_with_replacement(ids, g - 1):
        base = [Fraction(0)] * g
        for eid in combo:
            for i, x in enumerate(aj.source_lift(eid)):
                base[i] += x
        out.append(WCell(combo, tuple(base), tuple(aj.edge_direction(e) for e in combo)))
    return out


def _grid(k: int, step: Fraction) -> List[Tuple[Fraction, ...]]:
    n = int(1 / step)
    axis = [step * i for i in range(n + 1)]
    return list(product(axis, repeat=k))


@dataclass(frozen=True)
class ThetaCheck:
    shift: Optional[Vec]
    verified: bool
    candidates_tried: int
    points_checked: int

    def to_json(self) -> dict:
        from .exact.numbers import fmt_rational
        return {"shift": None if self.shift is None else [fmt_rational(x) for x in self.shift],
                "verified": self.verified, "candidates_tried": self.candidates_tried,
                "points_checked": self.points_checked,
                "method": "cell vertices exactly plus a grid of step 1/8 in cell parameters"}


def theta_correspondence_check(graph: WeightedMetricGraph, basis: Optional[CycleBasis] = None,
                               step: Fraction = Fraction(1, 8)) -> ThetaCheck:
    """Search a translation s with W_{g-1} + s inside the theta divisor."""
    aj = AbelJacobi(graph, basis)
    g = aj.g
    if g > MAX_G:
        raise UnsupportedDimension(f"g = {g} exceeds the supported bound {MAX_G}", g=g)
    if graph.total_weight:
        raise InvalidInput("the theta comparison needs a graph without vertex weights")
    th = ThetaFunction(aj.Q)
    cells = w_cells(graph, aj.basis, aj.p0)
    vcell = voronoi_cell(aj.Q)
    vpts = [vertex_point(graph, v) for v in graph.vertices]
    images = set()
    for combo in combinations_with_replacement(range(len(vpts)), g - 1):
        images.add(aj.divisor([(vpts[i], 1) for i in combo]))
    candidates = sorted({frac_part([a - b for a, b in zip(u, w)]) for u in vcell.vertices for w in images})
    corners = [tuple(Fraction(c) for c in cs) for cs in product((0, 1), repeat=g - 1)]
    grid = _grid(g - 1, Fraction(step))
    checked = 0
    for n, s in enumerate(candidates, 1):
        good = True
        for params in (corners, grid):
            for cell in cells:
                for par in params:
                    x = [a + b for a, b in zip(cell.at(par), s)]
                    checked += 1
                    if not th.on_divisor(x):
                        good = False
                        break
                if not good:
                    break
            if not good:
                break
        if good:
            return ThetaCheck(s, True, n, checked)
    return ThetaCheck(None, False, len(candidates), checked)
