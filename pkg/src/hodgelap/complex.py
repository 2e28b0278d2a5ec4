"""Weighted clique complexes built from weighted graphs.

Simplices are stored once, as ascending vertex tuples (the canonical
orientation).  Weights keep the value type they were given in, so callers
can pass :class:`fractions.Fraction` weights and get exact arithmetic out of
the local formulas; float copies are kept alongside for the matrix code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Real
from typing import Callable, Hashable, Iterable, Mapping, Sequence, Union

import numpy as np

Vertex = Hashable
Simplex = tuple

WeightRule = Union[Real, Mapping[Simplex, Real], Callable[[Simplex], Real]]


def _edge_key(u, v) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    """Vertex weights ``m0`` and symmetric edge weights ``m1``.

    ``m1`` is keyed on sorted pairs; pairs with weight zero are dropped, so
    the edge set is exactly the support of ``m1``.
    """

    vertices: tuple
    m0: Mapping[Vertex, Real]
    m1: Mapping[tuple, Real]
    neighbors: Mapping[Vertex, frozenset] = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        verts = tuple(sorted(self.vertices))
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex ids")
        m0 = dict(self.m0)
        for x in verts:
            if x not in m0:
                m0[x] = 1
            if not m0[x] > 0:
                raise ValueError(f"vertex weight m0({x!r}) must be positive, got {m0[x]!r}")
        m1 = {}
        vset = set(verts)
        for pair, w in self.m1.items():
            u, v = pair
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            if u not in vset or v not in vset:
                raise ValueError(f"edge {pair!r} references an undeclared vertex")
            if w < 0:
                raise ValueError(f"edge weight m1{pair!r} must be nonnegative, got {w!r}")
            key = _edge_key(u, v)
            if key in m1 and m1[key] != w:
                raise ValueError(f"edge {key!r} given twice with different weights")
            if w > 0:
                m1[key] = w
        nbrs = {x: set() for x in verts}
        for u, v in m1:
            nbrs[u].add(v)
            nbrs[v].add(u)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "m0", m0)
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "neighbors", {x: frozenset(s) for x, s in nbrs.items()})

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable = (), m0=None, weight=1):
        """Build from ``(u, v)`` or ``(u, v, m1)`` items; unit weights by default."""
        m1 = {}
        verts = set(vertices)
        for e in edges:
            if len(e) == 3:
                u, v, w = e
            else:
                (u, v), w = e, weight
            m1[_edge_key(u, v)] = w
            verts.update((u, v))
        return cls(tuple(verts), dict(m0 or {}), m1)

    @property
    def edges(self) -> list:
        return sorted(self.m1)

    def degree(self, x) -> int:
        return len(self.neighbors[x])

    def max_degree(self) -> int:
        return max((len(s) for s in self.neighbors.values()), default=0)

    def weighted_degree(self, x) -> float:
        return sum(self.m1[_edge_key(x, y)] for y in self.neighbors[x]) / self.m0[x]


class WeightedComplex:
    """Clique complex of a weighted graph, truncated at dimension ``n``.

    Level ``k`` holds the canonical ``k``-simplices (``(k+1)``-cliques).
    ``faces[k][s]`` lists the ``k+1`` facets of ``s`` with facet ``i`` equal
    to ``s`` minus its ``i``-th vertex, and ``cofaces[k][t]`` lists the
    extension vertices ``z`` of the ``(k-1)``-simplex ``t`` (its common
    neighbourhood restricted to registered ``k``-simplices).
    """

    def __init__(self, graph: WeightedGraph, n: int, simplices, weights):
        self.graph = graph
        self.n = n
        self.simplices: list[list[tuple]] = simplices
        self.index: list[dict] = [{s: i for i, s in enumerate(level)} for level in simplices]
        self.weights: list[list] = weights
        self.weight_arrays: list[np.ndarray] = [
            np.array([float(w) for w in level], dtype=float) for level in weights
        ]
        self.faces: list[dict] = [{} for _ in range(n + 1)]
        self.cofaces: list[dict] = [{} for _ in range(n + 2)]
        for k in range(1, n + 1):
            ext = {t: [] for t in simplices[k - 1]}
            for s in simplices[k]:
                facets = tuple(s[:i] + s[i + 1:] for i in range(k + 1))
                self.faces[k][s] = facets
                for i, t in enumerate(facets):
                    ext[t].append(s[i])
            self.cofaces[k] = {t: tuple(sorted(zs)) for t, zs in ext.items()}
        self.faces[0] = {s: () for s in simplices[0]}
        self.cofaces[n + 1] = {s: () for s in simplices[n]}

    def __repr__(self):
        counts = " / ".join(str(c) for c in self.counts())
        return f"WeightedComplex(n={self.n}, counts={counts})"

    def counts(self) -> list[int]:
        return [len(level) for level in self.simplices]

    def size(self, k: int) -> int:
        if 0 <= k <= self.n:
            return len(self.simplices[k])
        return 0

    def canonical(self, vertices: Iterable) -> tuple:
        return tuple(sorted(vertices))

    def has(self, k: int, simplex: Sequence) -> bool:
        return 0 <= k <= self.n and tuple(sorted(simplex)) in self.index[k]

    def weight(self, k: int, simplex: Sequence):
        """Raw weight ``m_k`` of a simplex given in any vertex order."""
        s = tuple(sorted(simplex))
        try:
            return self.weights[k][self.index[k][s]]
        except (KeyError, IndexError):
            raise KeyError(f"{s!r} is not a registered {k}-simplex") from None

    def extensions(self, k: int, face: Sequence) -> tuple:
        """Vertices ``z`` with ``face + (z,)`` a registered ``k``-simplex."""
        t = tuple(sorted(face))
        if not 1 <= k <= self.n + 1:
            raise ValueError(f"coface level k={k} outside 1..{self.n + 1}")
        try:
            return self.cofaces[k][t]
        except KeyError:
            raise KeyError(f"{t!r} is not a registered {k - 1}-simplex") from None

    def unit_weights(self) -> bool:
        return all(np.all(w == 1.0) for w in self.weight_arrays)

    def weight_bounds(self, k: int) -> tuple[float, float]:
        w = self.weight_arrays[k]
        if w.size == 0:
            return (np.inf, 0.0)
        return (float(w.min()), float(w.max()))


def _resolve_rule(rule: WeightRule) -> Callable[[tuple], Real]:
    if callable(rule):
        return rule
    if isinstance(rule, Mapping):
        table = {tuple(sorted(s)): w for s, w in rule.items()}
        return lambda s: table.get(s, 1)
    return lambda s: rule


def build_complex(graph: WeightedGraph, n: int, higher_weights: WeightRule = 1) -> WeightedComplex:
    """Clique-expand ``graph`` up to dimension ``n``.

    ``higher_weights`` assigns ``m_k`` for ``k >= 2``: a constant, a mapping
    from simplices (any vertex order; missing entries default to 1) or a
    callable on canonical tuples.
    """
    if n < 1:
        raise ValueError(f"dimension n must be >= 1, got {n}")
    rule = _resolve_rule(higher_weights)
    nbrs = graph.neighbors
    levels = [[(x,) for x in graph.vertices], [tuple(e) for e in graph.edges]]
    weights = [[graph.m0[x] for x in graph.vertices], [graph.m1[e] for e in graph.edges]]
    for k in range(2, n + 1):
        nxt = []
        for s in levels[k - 1]:
            common = set(nbrs[s[0]])
            for x in s[1:]:
                common &= nbrs[x]
            top = s[-1]
            nxt.extend(s + (z,) for z in sorted(z for z in common if z > top))
        nxt.sort()
        ws = []
        for s in nxt:
            w = rule(s)
            if not w > 0:
                raise ValueError(f"weight rule gave non-positive m_{k}{s!r} = {w!r}")
            ws.append(w)
        levels.append(nxt)
        weights.append(ws)
    return WeightedComplex(graph, n, levels, weights)


def face_degree(cx: WeightedComplex, k: int, face: Sequence):
    """``(1/m_{k-1}(face)) * sum_z m_k(face + z)`` over the extension set of ``face``.

    ``face`` has ``k`` vertices.  Returns the weight type's arithmetic, so
    exact when the weights are exact.  At ``k = n + 1`` the sum is empty.
    """
    t = tuple(sorted(face))
    if not cx.has(k - 1, t):
        raise KeyError(f"{t!r} is not a registered {k - 1}-simplex")
    zs = cx.extensions(k, t)
    if not zs:
        return 0
    total = sum(cx.weight(k, t + (z,)) for z in zs)
    return total / cx.weight(k - 1, t)


def up_down_degrees(cx: WeightedComplex, k: int) -> tuple:
    """``(D_down, D_up)`` at degree ``k``; empty levels give zeros."""
    if not 0 <= k <= cx.n:
        raise ValueError(f"degree k={k} outside 0..{cx.n}")
    down = 0
    if k >= 1:
        down = max((face_degree(cx, k, t) for t in cx.simplices[k - 1]), default=0)
    up = 0
    if k < cx.n:
        up = max((face_degree(cx, k + 1, s) for s in cx.simplices[k]), default=0)
    return down, up


@dataclass
class LineComplex:
    """Top simplices as nodes, adjacent when they share a facet.

    ``w`` is keyed on sorted node pairs, ``a`` on ordered pairs.
    """

    nodes: list
    adjacency: dict
    w: dict
    q: dict
    a: dict

    def degree(self, node) -> float:
        return sum(self.w[_edge_key(node, other)] for other, _ in self.adjacency[node])

    def max_degree(self) -> int:
        return max((len(v) for v in self.adjacency.values()), default=0)

    @property
    def D(self) -> dict:
        return {s: self.degree(s) for s in self.nodes}


def line_complex(cx: WeightedComplex) -> LineComplex:
    n = cx.n
    tops = list(cx.simplices[n])
    if not tops:
        raise ValueError("complex has no top-dimensional simplices")
    by_face: dict = {}
    for s in tops:
        for t in cx.faces[n][s]:
            by_face.setdefault(t, []).append(s)
    adjacency = {s: [] for s in tops}
    w, a = {}, {}
    for t, group in by_face.items():
        mt = cx.weight(n - 1, t)
        for s in group:
            for r in group:
                if r == s:
                    continue
                adjacency[s].append((r, t))
                a[(s, r)] = cx.weight(n, r) / mt
                if s < r:
                    w[(s, r)] = float(np.sqrt(float(cx.weight(n, s)) * float(cx.weight(n, r)))) / float(mt)
    q = {s: sum(cx.weight(n, s) / cx.weight(n - 1, t) for t in cx.faces[n][s]) for s in tops}
    return LineComplex(tops, adjacency, w, q, a)
