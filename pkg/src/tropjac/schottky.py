"""Graph cones up to genus 4, GL_g(Z)-equivalence of rank-one cones, and
recovery of a metric graph from a period matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .delaunay import MAX_G, reduce_to_definite, secondary_cone_of_form
from .errors import (
    InternalError, InvalidInput, NoPositiveSolution, UnsupportedConeShape, UnsupportedDimension,
)
from .exact.cones import PolyhedralCone
from .exact.linalg import (
    congruence, det, hermite_unimodular_complete, identity, inverse, lll_reduce, matmul, primitive, rank,
    rank_one, rank_one_root, solve, sym_dim, sym_to_vec, transpose, vec_to_sym,
)
from .metric_graph import Edge, WeightedMetricGraph
from .period_matrix import QuadraticForm, cycle_basis, graph_vectors, period_matrix

IntVec = Tuple[int, ...]


# -- graph enumeration ---------------------------------------------------------

def _cut_ok(V: int, mult: Dict[Tuple[int, int], int]) -> bool:
    """Connected and no edge cut of size < 3."""
    for mask in range(1, 1 << (V - 1)):
        side = {0} | {i + 1 for i in range(V - 1) if mask >> i & 1}
        if len(side) == V:
            continue
        cut = sum(m for (a, b), m in mult.items() if (a in side) != (b in side))
        if cut < 3:
            return False
    return True


def _canonical(V: int, mult: Dict[Tuple[int, int], int]) -> Tuple:
    best = None
    for perm in permutations(range(V)):
        key = tuple(sorted((min(perm[a], perm[b]), max(perm[a], perm[b]), m) for (a, b), m in mult.items() if m))
        if best is None or key < best:
            best = key
    return best


def _loopless_graphs(b: int) -> List[Tuple[int, Tuple]]:
    """3-edge-connected loopless multigraphs with first Betti number b, up to
    isomorphism, as (V, canonical edge multiplicities)."""
    out = {}
    if b < 2:
        return []
    for V in range(2, 2 * b - 1):
        E = b + V - 1
        pairs = [(i, j) for i in range(V) for j in range(i + 1, V)]
        last_pair = {v: max(k for k, (i, j) in enumerate(pairs) if v in (i, j)) for v in range(V)}
        finalize: Dict[int, List[int]] = {}
        for v, k in last_pair.items():
            finalize.setdefault(k, []).append(v)
        deg = [0] * V
        mult: Dict[Tuple[int, int], int] = {}

        def rec(k: int, left: int) -> None:
            if k == len(pairs):
                if left == 0 and _cut_ok(V, mult):
                    key = _canonical(V, mult)
                    out.setdefault((V, key), None)
                return
            i, j = pairs[k]
            for m in range(left + 1):
                deg[i] += m
                deg[j] += m
                mult[(i, j)] = m
                ok = True
                for v in finalize.get(k, ()):
                    if deg[v] < 3 or (v > 0 and deg[v] > deg[v - 1]):
                        ok = False
                if ok:
                    rec(k + 1, left - m)
                deg[i] -= m
                deg[j] -= m
            mult.pop((i, j), None)

        rec(0, E)
    return sorted(out)


def _build_graph(V: int, key: Tuple, loops: int) -> WeightedMetricGraph:
    edges = []
    for a, b, m in key:
        for _ in range(m):
            edges.append(Edge(len(edges), a, b, Fraction(1)))
    for _ in range(loops):
        edges.append(Edge(len(edges), 0, 0, Fraction(1)))
    return WeightedMetricGraph({v: 0 for v in range(max(V, 1))}, edges)


@dataclass(frozen=True)
class CatalogEntry:
    """A graph with unit lengths, its first Betti number, and the columns of its
    cycle-basis matrix padded to the catalog genus (one per edge id)."""

    graph: WeightedMetricGraph
    h: int
    vectors: Tuple[Tuple[int, IntVec], ...]
    g: int = 0

    @property
    def cone(self) -> PolyhedralCone:
        g = len(self.vectors[0][1]) if self.vectors else self.g
        gens = [sym_to_vec(rank_one(v)) for _, v in self.vectors]
        if not gens:
            return PolyhedralCone(sym_dim(g), equations=[[int(i == j) for j in range(sym_dim(g))]
                                                        for i in range(sym_dim(g))])
        return PolyhedralCone(sym_dim(g), generators=gens)

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def describe(self) -> str:
        return f"b1={self.h} V={len(self.graph.vertices)} E={len(self.graph.edges)}"


@dataclass(frozen=True)
class GraphCatalog:
    g: int
    entries: Tuple[CatalogEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@lru_cache(maxsize=None)
def graph_catalog(g: int) -> GraphCatalog:
    """One graph per GL_g(Z)-class of graph cones with b1 <= g (faces included)."""
    if g > MAX_G:
        raise UnsupportedDimension(f"g = {g} exceeds the supported bound {MAX_G}", g=g)
    if g < 0:
        raise InvalidInput("genus must be nonnegative")
    raw = []
    for h in range(g + 1):
        for b in range(h + 1):
            loops = h - b
            if b == 0:
                raw.append(_build_graph(1, (), loops))
            for V, key in _loopless_graphs(b):
                raw.append(_build_graph(V, key, loops))
    entries: List[CatalogEntry] = []
    for G in raw:
        h = len(G.edges) - len(G.vertices) + 1
        basis = cycle_basis(G)
        vecs = tuple((eid, tuple(v) + (0,) * (g - h)) for eid, v in graph_vectors(G, basis))
        entries.append(CatalogEntry(G, h, vecs, g))
    entries.sort(key=lambda e: (e.h, e.dimension, len(e.graph.vertices), e.vectors))
    classes: List[CatalogEntry] = []
    for e in entries:
        if not any(c.h == e.h and c.dimension == e.dimension and
                   find_equivalence([v for _, v in c.vectors], [v for _, v in e.vectors]) is not None
                   for c in classes):
            classes.append(e)
    return GraphCatalog(g, tuple(classes))


# -- equivalence of vector configurations -------------------------------------------

def _basis_profile(vecs: Sequence[IntVec], r: int) -> Tuple:
    n = len(vecs)
    per = [0] * n
    total = 0
    for sub in combinations(range(n), r):
        if rank([list(vecs[i]) for i in sub]) == r:
            total += 1
            for i in sub:
                per[i] += 1
    return total, tuple(sorted(per))


@dataclass(frozen=True)
class EquivalenceWitness:
    """U with U^T sigma_source U = sigma_target.  M = U^T sends each source
    vector to sign * target vector."""

    U: Tuple[Tuple[int, ...], ...]
    permutation: Tuple[int, ...]
    signs: Tuple[int, ...]

    @property
    def M(self) -> List[List[int]]:
        return transpose([list(r) for r in self.U])

    def to_json(self) -> dict:
        return {"U": [list(r) for r in self.U], "permutation": list(self.permutation),
                "signs": list(self.signs)}


def find_equivalence(source: Sequence[Sequence[int]], target: Sequence[Sequence[int]]) -> Optional[EquivalenceWitness]:
    """Backtracking search for M in GL_g(Z) with M v_i = +-w_pi(i)."""
    V = [tuple(int(x) for x in v) for v in source]
    W = [tuple(int(x) for x in w) for w in target]
    n = len(V)
    if n != len(W):
        return None
    if n == 0:
        return EquivalenceWitness(tuple(tuple(r) for r in identity(0)), (), ())
    g = len(V[0])
    r = rank([list(v) for v in V])
    if r != rank([list(w) for w in W]):
        return None
    if _basis_profile(V, r) != _basis_profile(W, r):
        return None
    basis: List[int] = []
    for i in range(n):
        if rank([list(V[j]) for j in basis + [i]]) == len(basis) + 1:
            basis.append(i)
        if len(basis) == r:
            break
    Bcols = [[Fraction(V[i][k]) for i in basis] for k in range(g)]  # g x r
    coords = []
    for v in V:
        c = solve(Bcols, [Fraction(x) for x in v])
        coords.append(c)
    level: Dict[int, List[int]] = {}
    for i, c in enumerate(coords):
        top = max(k for k in range(r) if c[k] != 0)
        level.setdefault(top, []).append(i)
    # repeated vectors (parallel edges) are interchangeable: take the first unused
    signed: Dict[IntVec, List[Tuple[int, int]]] = {}
    for j, w in enumerate(W):
        signed.setdefault(w, []).append((j, 1))
        signed.setdefault(tuple(-x for x in w), []).append((j, -1))
    profile_src = _vector_profiles(V, r)
    profile_tgt = _vector_profiles(W, r)
    images: List[Optional[IntVec]] = [None] * r
    perm: List[Optional[int]] = [None] * n
    sgn: List[int] = [0] * n
    used: set = set()

    def rec(k: int):
        if k == r:
            return _finish(V, W, basis, images, perm, sgn, g, r)
        bi = basis[k]
        for j in range(n):
            if j in used or profile_src[bi] != profile_tgt[j]:
                continue
            for s in ((1,) if k == 0 else (1, -1)):
                images[k] = tuple(s * x for x in W[j])
                newly = []
                ok = True
                for i in level.get(k, ()):
                    img = tuple(sum(coords[i][m] * images[m][t] for m in range(k + 1)) for t in range(g))
                    if any(x.denominator != 1 for x in img):
                        ok = False
                        break
                    hit = next((h for h in signed.get(tuple(int(x) for x in img), ())
                                if h[0] not in used and profile_src[i] == profile_tgt[h[0]]), None)
                    if hit is None:
                        ok = False
                        break
                    used.add(hit[0])
                    newly.append(hit[0])
                    perm[i], sgn[i] = hit
                if ok:
                    res = rec(k + 1)
                    if res is not None:
                        return res
                for j2 in newly:
                    used.discard(j2)
        images[k] = None
        return None

    return rec(0)


def _vector_profiles(vecs: Sequence[IntVec], r: int) -> List[int]:
    n = len(vecs)
    per = [0] * n
    for sub in combinations(range(n), r):
        if rank([list(vecs[i]) for i in sub]) == r:
            for i in sub:
                per[i] += 1
    return per


def _finish(V, W, basis, images, perm, sgn, g, r) -> Optional[EquivalenceWitness]:
    if r == g:
        Bm = [[Fraction(V[i][k]) for i in basis] for k in range(g)]
        Tm = [[Fraction(images[m][k]) for m in range(r)] for k in range(g)]
        M = matmul(Tm, inverse(Bm))
        if any(x.denominator != 1 for row in M for x in row):
            return None
        M = [[int(x) for x in row] for row in M]
    else:
        try:
            S = hermite_unimodular_complete([list(V[i]) for i in basis], g)
            T = hermite_unimodular_complete([list(images[m]) for m in range(r)], g)
        except Exception:
            return None
        S = [row[:g - r] + [V[i][k] for i in basis] for k, row in enumerate(S)]
        T = [row[:g - r] + [images[m][k] for m in range(r)] for k, row in enumerate(T)]
        M = matmul(T, inverse(S))
        if any(Fraction(x).denominator != 1 for row in M for x in row):
            return None
        M = [[int(x) for x in row] for row in M]
    if abs(det(M)) != 1:
        return None
    for i, v in enumerate(V):
        img = tuple(sum(M[a][b] * v[b] for b in range(g)) for a in range(g))
        if img != tuple(sgn[i] * x for x in W[perm[i]]):
            return None
    U = tuple(tuple(M[b][a] for b in range(g)) for a in range(g))
    return EquivalenceWitness(U, tuple(perm), tuple(sgn))


def _roots(cone: PolyhedralCone) -> List[IntVec]:
    d = cone.dim
    g = 0
    while sym_dim(g) < d:
        g += 1
    if sym_dim(g) != d:
        raise InvalidInput("cone does not live in a space of symmetric matrices")
    out = []
    for ray in cone.rays():
        v = rank_one_root(vec_to_sym(ray, g))
        if v is None:
            raise UnsupportedConeShape("cone has a generator of rank above one", ray=list(ray))
        out.append(tuple(v))
    return out


def cone_equivalent(c1: PolyhedralCone, c2: PolyhedralCone) -> Optional[EquivalenceWitness]:
    """Witness U with U^T c1 U = c2, or None.  Both cones must have rank-one rays."""
    if c1.dim != c2.dim:
        return None
    return find_equivalence(_roots(c1), _roots(c2))


def transform_ray(U: Sequence[Sequence[int]], ray: Sequence) -> IntVec:
    g = len(U)
    M = congruence(vec_to_sym(ray, g), U)
    return tuple(primitive(sym_to_vec(M), sign_normalize=False))


def validate_witness(U: Sequence[Sequence[int]], source: PolyhedralCone, target: PolyhedralCone) -> bool:
    """U integral, |det U| = 1 and U^T source U has exactly target's rays."""
    U = [[Fraction(x) for x in row] for row in U]
    if any(x.denominator != 1 for row in U for x in row):
        return False
    U = [[int(x) for x in row] for row in U]
    if abs(det(U)) != 1 or source.dim != target.dim:
        return False
    mapped = sorted(transform_ray(U, r) for r in source.rays())
    return mapped == sorted(tuple(r) for r in target.rays())


# -- recovery ----------------------------------------------------------------------

@dataclass
class SchottkyResult:
    in_locus: bool
    graph: Optional[WeightedMetricGraph] = None
    lengths: Optional[Dict[int, Fraction]] = None
    U: Optional[List[List[int]]] = None
    entry: Optional[CatalogEntry] = None
    scanned: int = 0
    reason: str = ""
    notes: List[str] = field(default_factory=list)

    def to_json(self, witness: bool = True) -> dict:
        from .exact.numbers import fmt_rational
        if not self.in_locus:
            return {"in_schottky_locus": False, "catalog_entries_scanned": self.scanned, "reason": self.reason,
                    "notes": list(self.notes)}
        out = {"in_schottky_locus": True, "graph": self.graph.to_json(),
               "lengths": {str(k): fmt_rational(v) for k, v in sorted(self.lengths.items())},
               "notes": list(self.notes)}
        if witness:
            out["witness"] = {"U": self.U}
        return out


def schottky_recover(Q, catalog: Optional[GraphCatalog] = None) -> SchottkyResult:
    """Metric graph whose period matrix is U^T Q U for the returned unimodular U."""
    form = Q if isinstance(Q, QuadraticForm) else QuadraticForm(Q)
    g = form.g
    Qp, U0, k = reduce_to_definite(form)
    gp = g - k
    if gp > MAX_G:
        raise UnsupportedDimension(f"definite rank {gp} exceeds the supported bound {MAX_G}", g=gp)
    if catalog is None:
        catalog = graph_catalog(gp)
    if gp == 0:
        G = WeightedMetricGraph({0: k})
        return SchottkyResult(True, G, {}, U0, None, 0, notes=["all genus carried by vertex weight"])
    # a reduced basis keeps the Delaunay enumeration small
    Qp, L = lll_reduce(Qp)
    block = [[L[i][j] if i < gp and j < gp else int(i == j) for j in range(g)] for i in range(g)]
    U0 = [[int(x) for x in row] for row in matmul(U0, block)]
    sigma = secondary_cone_of_form(Qp)
    rays = sigma.rays()
    roots = []
    for ray in rays:
        v = rank_one_root(vec_to_sym(ray, gp))
        roots.append(None if v is None else tuple(v))
    scanned = 0
    candidates = [e for e in catalog if e.h == gp]
    high_rank = any(v is None for v in roots)
    rejected = {"ray_rank": 0, "ray_count": 0, "no_witness": 0}
    for entry in candidates:
        scanned += 1
        # graph cones have only rank-one rays, and congruence preserves rank
        if high_rank:
            rejected["ray_rank"] += 1
            continue
        if entry.dimension != len(roots):
            rejected["ray_count"] += 1
            continue
        W = [v[:gp] for _, v in entry.vectors]
        wit = find_equivalence(roots, W)
        if wit is None:
            rejected["no_witness"] += 1
            continue
        U = [list(r) for r in wit.U]
        Q2 = congruence(Qp, U)
        A = [[Fraction(x) for x in col] for col in zip(*[sym_to_vec(rank_one(w)) for w in W])]
        alpha = solve(A, sym_to_vec(Q2))
        if alpha is None:
            raise InternalError("transformed form is not in the span of the graph cone")
        if any(a <= 0 for a in alpha):
            raise NoPositiveSolution("edge lengths are not all positive", lengths=[str(a) for a in alpha])
        lengths = {eid: a for (eid, _), a in zip(entry.vectors, alpha)}
        G = entry.graph.with_lengths(lengths)
        notes = []
        if k:
            v0 = G.vertices[0]
            G = G.with_weights({v0: G.weight(v0) + k})
            notes.append(f"weight {k} placed on vertex {v0}")
        Ufull = [[0] * g for _ in range(g)]
        for i in range(gp):
            for j in range(gp):
                Ufull[i][j] = U[i][j]
        for i in range(gp, g):
            Ufull[i][i] = 1
        Utot = [[int(x) for x in row] for row in matmul(U0, Ufull)]
        if period_matrix(G).matrix != congruence(form.matrix, Utot):
            raise InternalError("recovered graph does not reproduce the form")
        return SchottkyResult(True, G, lengths, Utot, entry, scanned, notes=notes)
    why = ", ".join(f"{k}={v}" for k, v in rejected.items() if v)
    reason = "no catalog cone is GL-equivalent to the secondary cone"
    if high_rank:
        reason = "secondary cone has a ray of rank above one; no graph cone matches"
    return SchottkyResult(False, scanned=scanned, reason=reason,
                          notes=[f"rejected: {why}"] if why else [])
