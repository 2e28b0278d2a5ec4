"""Fixture complexes: small named graphs, seeded random complexes, meshes and patches."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .cochains import Cochain
from .coloring import Coloring
from .complex import WeightedComplex, WeightedGraph, build_complex
from .hodge import coherent_orientation


def complete_graph(n: int, weight=1) -> WeightedGraph:
    return WeightedGraph.from_edges(itertools.combinations(range(n), 2), range(n), weight=weight)


def cycle_graph(n: int, weight=1) -> WeightedGraph:
    return WeightedGraph.from_edges([(i, (i + 1) % n) for i in range(n)], range(n), weight=weight)


def path_graph(n: int) -> WeightedGraph:
    return WeightedGraph.from_edges([(i, i + 1) for i in range(n - 1)], range(n))


def _weights(rng, count, low, high):
    return [float(x) for x in rng.uniform(low, high, size=count)]


def random_complex(seed: int, max_vertices: int = 12, max_dim: int = 3,
                   weight_range=(0.5, 2.0)) -> WeightedComplex:
    """Seeded Erdos-Renyi clique complex with random positive weights on every level.

    Vertex count is drawn from ``[4, max_vertices]``, the edge probability
    from ``[0.3, 0.8]`` and the dimension from ``[1, max_dim]``, lowered
    while the top level is empty.
    """
    rng = np.random.default_rng(seed)
    nv = int(rng.integers(4, max_vertices + 1))
    p = float(rng.uniform(0.3, 0.8))
    n = int(rng.integers(1, max_dim + 1))
    edges = [e for e in itertools.combinations(range(nv), 2) if rng.random() < p]
    lo, hi = weight_range
    m0 = dict(zip(range(nv), _weights(rng, nv, lo, hi)))
    m1 = dict(zip(edges, _weights(rng, len(edges), lo, hi)))
    graph = WeightedGraph(tuple(range(nv)), m0, m1)
    # a seeded per-simplex rule keeps higher weights reproducible
    salt = int(rng.integers(2**31))

    def rule(s):
        return float(np.random.default_rng([salt, *s]).uniform(lo, hi))

    cx = build_complex(graph, n, rule)
    # trim empty top levels so the top-degree block is never vacuous
    while cx.n > 1 and not cx.size(cx.n):
        cx = build_complex(graph, cx.n - 1, rule)
    return cx


def random_bipartite(seed: int, max_vertices: int = 12, weighted: bool = True):
    """Random bipartite graph as a 1-dimensional complex with its 2-colouring."""
    rng = np.random.default_rng(seed)
    a = int(rng.integers(2, max_vertices // 2 + 1))
    b = int(rng.integers(2, max_vertices - a + 1))
    left, right = range(a), range(a, a + b)
    p = float(rng.uniform(0.3, 0.9))
    edges = [(u, v) for u in left for v in right if rng.random() < p] or [(0, a)]
    verts = tuple(range(a + b))
    if weighted:
        m0 = dict(zip(verts, _weights(rng, len(verts), 0.5, 2.0)))
        m1 = dict(zip(edges, _weights(rng, len(edges), 0.5, 2.0)))
    else:
        m0, m1 = None, {e: 1 for e in edges}
    graph = WeightedGraph(verts, m0 or {x: 1 for x in verts}, m1)
    coloring = Coloring({x: (1 if x < a else 2) for x in verts}, 2)
    return build_complex(graph, 1), coloring


def triangular_patch(rows: int, cols: int, seed: int | None = None):
    """Triangulated ``rows x cols`` patch of the triangular lattice, properly 3-coloured.

    Vertex ``(i, j)`` gets id ``i * cols + j`` and colour ``(i + 2 j) mod 3 + 1``.
    With ``seed`` all weights are drawn from ``[0.5, 2]``.
    """
    vid = lambda i, j: i * cols + j
    edges = []
    for i in range(rows):
        for j in range(cols):
            for di, dj in ((1, 0), (0, 1), (1, -1)):
                a, b = i + di, j + dj
                if 0 <= a < rows and 0 <= b < cols:
                    edges.append((vid(i, j), vid(a, b)))
    verts = tuple(range(rows * cols))
    rng = np.random.default_rng(seed) if seed is not None else None
    if rng is None:
        graph = WeightedGraph.from_edges(edges, verts)
        cx = build_complex(graph, 2)
    else:
        m0 = dict(zip(verts, _weights(rng, len(verts), 0.5, 2.0)))
        m1 = dict(zip(edges, _weights(rng, len(edges), 0.5, 2.0)))
        salt = int(rng.integers(2**31))
        cx = build_complex(WeightedGraph(verts, m0, m1), 2,
                           lambda s: float(np.random.default_rng([salt, *s]).uniform(0.5, 2.0)))
    colors = {vid(i, j): (i + 2 * j) % 3 + 1 for i in range(rows) for j in range(cols)}
    return cx, Coloring(colors, 3)


def tetra_mesh(size: int = 3) -> WeightedComplex:
    """Freudenthal (Kuhn) triangulation of a ``size^3`` block of unit cubes.

    Grid points are joined when their difference lies in ``{0,1}^3``; the
    clique complex is then exactly the mesh, six tetrahedra per cube, and
    interior tetrahedra have four neighbours.
    """
    pts = list(itertools.product(range(size + 1), repeat=3))
    vid = {p: i for i, p in enumerate(pts)}
    steps = [s for s in itertools.product((0, 1), repeat=3) if any(s)]
    edges = []
    for p in pts:
        for s in steps:
            q = tuple(a + b for a, b in zip(p, s))
            if q in vid:
                edges.append((vid[p], vid[q]))
    return build_complex(WeightedGraph.from_edges(edges, range(len(pts))), 3)


WEIGHTED_TETRA_VALUES = (Fraction(3), (Fraction(1), Fraction(-2), Fraction(1, 2), Fraction(4)))


def weighted_tetra():
    """The worked weighted tetrahedron: ``sigma = [0,1,2,3]`` and its four neighbours.

    Neighbour ``i`` shares the facet of ``sigma`` that omits vertex ``i`` and
    adds vertex ``4 + i``.  Weights: ``m3(sigma) = 2``, other tetrahedra 1,
    the facets of ``sigma`` have ``m2 = (1, 2, 1, 2)`` in omission order and
    every other simplex has weight 1.  All weights are Fractions.

    Returns ``(complex, sigma, neighbours, u)`` where the neighbours are
    ordered coherently with ``sigma`` and ``u`` is the exact 3-cochain with
    ``u(sigma) = 3`` and neighbour values ``(1, -2, 1/2, 4)``.
    """
    sigma = (0, 1, 2, 3)
    edges = list(itertools.combinations(sigma, 2))
    raw_neighbors = []
    for i in range(4):
        face = sigma[:i] + sigma[i + 1:]
        extra = 4 + i
        edges += [(x, extra) for x in face]
        raw_neighbors.append(tuple(sorted(face + (extra,))))
    graph = WeightedGraph.from_edges(edges, range(8), weight=Fraction(1))
    graph = WeightedGraph(graph.vertices, {x: Fraction(1) for x in graph.vertices}, graph.m1)
    facet_m2 = {sigma[:i] + sigma[i + 1:]: Fraction(m) for i, m in enumerate((1, 2, 1, 2))}

    def rule(s):
        if s == sigma:
            return Fraction(2)
        return facet_m2.get(s, Fraction(1))

    cx = build_complex(graph, 3, rule)
    neighbors = [coherent_orientation(sigma, r) for r in raw_neighbors]
    u = Cochain.zeros(cx, 3, "skew", dtype=object)
    u.values[:] = Fraction(0)
    center, around = WEIGHTED_TETRA_VALUES
    u.set(sigma, center)
    for r, val in zip(neighbors, around):
        u.set(r, val)
    return cx, sigma, neighbors, u
