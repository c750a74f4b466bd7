"""Degree-2 admissible covers of phylogenetic trees by hyperelliptic graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import InternalError, InvalidInput, OddLeafCount, UnsupportedGenus
from .metric_graph import Edge, InfiniteEdge, WeightedMetricGraph, genus, minimal_skeleton
from .phylo import MarkedPoints, PhyloTree, neighbor_joining, plucker_valuations, tree_metric


@dataclass
class CoverMap:
    """phi: source -> target.

    ``edge_map`` sends a source edge id to (target internal edge index, dilation);
    ``leaf_map`` sends an infinite-edge label of the source to the target leaf label.
    All leaf preimages have dilation 2.
    """

    source: WeightedMetricGraph
    target: PhyloTree
    vertex_map: Dict[int, int]
    edge_map: Dict[int, Tuple[int, int]]
    leaf_map: Dict[str, int]
    local_degree: Dict[int, int]
    warnings: List[str] = field(default_factory=list)

    def leaf_dilation(self, label: str) -> int:
        return 2

    def check(self) -> List[str]:
        """Independent re-check of harmonicity, degree 2 and local Riemann-Hurwitz.
        Returns a list of violations (empty when the cover is admissible)."""
        problems = []
        src, tgt = self.source, self.target
        # total degree over every target edge and leaf
        for k in range(len(tgt.edges)):
            tot = sum(d for t, d in self.edge_map.values() if t == k)
            if tot != 2:
                problems.append(f"target edge {k} has degree {tot}")
        for lab in tgt.leaves:
            tot = sum(2 for l, t in self.leaf_map.items() if t == lab)
            if tot != 2:
                problems.append(f"target leaf {lab} has degree {tot}")
        for v in src.vertices:
            tv = self.vertex_map[v]
            per_target: Dict[Tuple[str, int], int] = {}
            ram = 0
            for e in src.incident(v):
                t, d = self.edge_map[e.id]
                per_target[("e", t)] = per_target.get(("e", t), 0) + d
                ram += d - 1
            for r in src.infinite_edges:
                if r.at == v:
                    lab = self.leaf_map[r.label]
                    per_target[("l", lab)] = per_target.get(("l", lab), 0) + 2
                    ram += 1
            expected = {("e", k) for k, (a, b, _) in enumerate(tgt.edges) if tv in (a, b)}
            expected |= {("l", lab) for lab, at in tgt.leaves.items() if at == tv}
            if set(per_target) != expected:
                problems.append(f"vertex {v} does not surject onto the star of {tv}")
            degs = set(per_target.values())
            if len(degs) > 1:
                problems.append(f"vertex {v} is not harmonic: {sorted(degs)}")
            d = degs.pop() if degs else self.local_degree[v]
            if d != self.local_degree[v]:
                problems.append(f"vertex {v} local degree mismatch")
            if 2 - 2 * src.weight(v) != 2 * d - ram:
                problems.append(f"local Riemann-Hurwitz fails at vertex {v}")
        for tv in tgt.vertices:
            tot = sum(self.local_degree[v] for v, t in self.vertex_map.items() if t == tv)
            if tot != 2:
                problems.append(f"target vertex {tv} has degree {tot}")
        return problems

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "vertex_map": [{"source": v, "target": t} for v, t in sorted(self.vertex_map.items())],
            "edge_map": [{"source": e, "target_edge": t, "dilation": d}
                         for e, (t, d) in sorted(self.edge_map.items())],
            "leaf_map": [{"source": l, "target_leaf": str(t), "dilation": 2}
                         for l, t in sorted(self.leaf_map.items(), key=lambda kv: kv[1])],
            "local_degree": [{"vertex": v, "degree": d} for v, d in sorted(self.local_degree.items())],
            "warnings": list(self.warnings),
        }


def choose_root(T: PhyloTree) -> int:
    """Vertex of minimal eccentricity (edge count), lowest id on ties."""
    best = None
    for v in T.vertices:
        depth = _depths(T, v)
        ecc = max(depth.values())
        if best is None or ecc < best[0]:
            best = (ecc, v)
    return best[1]


def _depths(T: PhyloTree, root: int) -> Dict[int, int]:
    depth = {root: 0}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y, _ in sorted(T.neighbors(x)):
            if y not in depth:
                depth[y] = depth[x] + 1
                queue.append(y)
    return depth


def build_cover(T: PhyloTree, root: Optional[int] = None) -> Tuple[WeightedMetricGraph, CoverMap]:
    """Hyperelliptic graph admissibly covering T, and the cover.

    The graph is the cover's source with leaf preimages contracted; its vertices
    are the preimages of tree vertices.  ``minimal_skeleton`` reduces it further.
    """
    n = T.n
    warnings: List[str] = []
    if n < 2:
        raise InvalidInput("tree needs at least two leaves")
    if n % 2:
        warnings.append(OddLeafCount.code)
    root = choose_root(T) if root is None else root
    if root not in T.vertices:
        raise InvalidInput(f"unknown root {root}")
    depth = _depths(T, root)
    parent_edge: Dict[int, int] = {}
    for k, (a, b, _) in enumerate(T.edges):
        child = a if depth[a] > depth[b] else b
        parent_edge[child] = k
    order = sorted(T.vertices, key=lambda v: (-depth[v], v))

    weights: Dict[int, int] = {}
    vmap: Dict[int, int] = {}
    ldeg: Dict[int, int] = {}
    edges: List[Edge] = []
    emap: Dict[int, Tuple[int, int]] = {}
    rays: List[InfiniteEdge] = []
    lmap: Dict[str, int] = {}
    pre: Dict[int, List[int]] = {}  # target vertex -> its preimages
    # pending[k]: source vertices carrying the lower ends of target edge k
    pending: Dict[int, List[int]] = {}
    bridge: Dict[int, bool] = {}
    nv = [0]

    def new_vertex(t: int, w: int, d: int) -> int:
        v = nv[0]
        nv[0] += 1
        weights[v], vmap[v], ldeg[v] = w, t, d
        pre.setdefault(t, []).append(v)
        return v

    for v in order:
        child_edges = sorted(k for c, k in parent_edge.items() if (T.edges[k][0] == v or T.edges[k][1] == v) and c != v)
        count = T.leaf_count(v) + sum(1 for k in child_edges if bridge[k])
        is_root = v == root
        if count == 0:
            mine = [new_vertex(v, 0, 1), new_vertex(v, 0, 1)]
        elif count % 2 == 0:
            mine = [new_vertex(v, (count - 2) // 2, 2)]
        else:
            if is_root and n % 2 == 0:
                raise InternalError("odd ramification count at the root of an even tree")
            mine = [new_vertex(v, (count - 1) // 2, 2)]
        # connect the pending lower ends of child edges
        for k in child_edges:
            lower = pending[k]
            length = T.edges[k][2]
            if bridge[k]:
                eid = len(edges)
                edges.append(Edge(eid, lower[0], mine[0], length / 2))
                emap[eid] = (k, 2)
            else:
                for i, x in enumerate(lower):
                    eid = len(edges)
                    edges.append(Edge(eid, x, mine[i % len(mine)], length))
                    emap[eid] = (k, 1)
        for lab in sorted(l for l, at in T.leaves.items() if at == v):
            rays.append(InfiniteEdge(mine[0], str(lab)))
            lmap[str(lab)] = lab
        if not is_root:
            k = parent_edge[v]
            if count % 2 == 1:
                bridge[k] = True
                pending[k] = [mine[0]]
            else:
                bridge[k] = False
                pending[k] = [mine[0], mine[-1]] if len(mine) == 2 else [mine[0], mine[0]]

    model = WeightedMetricGraph(weights, edges, rays)
    cover = CoverMap(model, T, vmap, emap, lmap, ldeg, warnings)
    problems = cover.check()
    if n % 2:
        # an odd root count leaves one branch point unaccounted for at the root
        exempt = {f"local Riemann-Hurwitz fails at vertex {v}" for v in pre[root]}
        problems = [p for p in problems if p not in exempt]
    if problems:
        raise InternalError("constructed cover is not admissible", problems=problems)
    contracted = WeightedMetricGraph(weights, edges)
    g = genus(contracted)
    if n % 2 == 0 and g != n // 2 - 1:
        raise InternalError(f"cover genus {g} differs from {n // 2 - 1}")
    return contracted, cover


def bridge_excess(graph: WeightedMetricGraph) -> List[int]:
    """Vertices with more than 2w + 2 adjacent bridges."""
    bridges = set(graph.bridges())
    out = []
    for v in graph.vertices:
        b = sum(1 for e in graph.incident(v) if e.id in bridges)
        if b > 2 * graph.weight(v) + 2:
            out.append(v)
    return out


@dataclass
class PipelineResult:
    graph: WeightedMetricGraph
    skeleton: Optional[WeightedMetricGraph]
    cover: CoverMap
    tree: PhyloTree
    plucker: List[Fraction]
    warnings: List[str]


def hyperelliptic_pipeline(pts: MarkedPoints) -> WeightedMetricGraph:
    """Plucker valuations -> tree metric -> neighbor joining -> admissible cover."""
    return hyperelliptic_pipeline_full(pts).graph


def hyperelliptic_pipeline_full(pts: MarkedPoints) -> PipelineResult:
    """All intermediate stages.  ``skeleton`` is None below genus 2."""
    vals = plucker_valuations(pts)
    D = tree_metric(vals, pts.n)
    T = neighbor_joining(D)
    graph, cover = build_cover(T)
    warnings = list(cover.warnings)
    skeleton = None
    if genus(graph) >= 2:
        skeleton = minimal_skeleton(graph)
    else:
        warnings.append(UnsupportedGenus.code)
    return PipelineResult(graph, skeleton, cover, T, vals, warnings)
