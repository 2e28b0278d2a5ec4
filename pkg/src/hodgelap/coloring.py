"""Colour signs, the diagonal unitary they define, and skew/sym intertwining checks.

The colour sign of an ordered simplex is the parity of the permutation that
sorts its vertex colours.  Deleting vertex ``i`` changes that parity by
``i + rank_i`` where ``rank_i`` is the colour rank of ``x_i`` inside the
simplex (:func:`parity_shift`).  :func:`parity_check` tests the weaker
relation without the rank term, and :func:`intertwine_residuals` measures
how far the colour unitary is from intertwining the two flavours.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.linalg as la

from .cochains import Cochain, permutation_parity
from .complex import WeightedComplex, WeightedGraph
from .hodge import adjoint, coboundary, laplacian_block, normalized_block


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    colors: Mapping
    p: int

    def __getitem__(self, x) -> int:
        return self.colors[x]

    def check(self, graph: WeightedGraph) -> None:
        for u, v in graph.edges:
            if u not in self.colors or v not in self.colors:
                missing = u if u not in self.colors else v
                raise ColoringError(f"vertex {missing!r} has no colour")
            if self.colors[u] == self.colors[v]:
                raise ColoringError(f"improper colouring: edge ({u!r}, {v!r}) has both ends coloured {self.colors[u]}")
        bad = [c for c in self.colors.values() if not 1 <= c <= self.p]
        if bad:
            raise ColoringError(f"colour {bad[0]} outside 1..{self.p}")


def greedy_coloring(graph: WeightedGraph, p: int | None = None) -> Coloring:
    """BFS-order greedy colouring with the smallest free colour.

    Raises :class:`ColoringError` when more than ``p`` colours are needed;
    that says nothing about the chromatic number.
    """
    colors: dict = {}
    for root in graph.vertices:
        if root in colors:
            continue
        queue = deque([root])
        seen = {root}
        while queue:
            x = queue.popleft()
            used = {colors[y] for y in graph.neighbors[x] if y in colors}
            c = 1
            while c in used:
                c += 1
            if p is not None and c > p:
                raise ColoringError(f"greedy colouring needs more than {p} colours at vertex {x!r}")
            colors[x] = c
            for y in sorted(graph.neighbors[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    used = max(colors.values(), default=1)
    return Coloring(colors, p if p is not None else used)


def color_sign(simplex: Sequence, coloring: Coloring) -> int:
    cols = [coloring[x] for x in simplex]
    if len(set(cols)) != len(cols):
        raise ColoringError(f"simplex {tuple(simplex)!r} has repeated colours {cols}")
    return -1 if permutation_parity(cols) else 1


def sign_vector(cx: WeightedComplex, k: int, coloring: Coloring) -> np.ndarray:
    """Colour signs of the canonical ``k``-simplices."""
    return np.array([color_sign(s, coloring) for s in cx.simplices[k]], dtype=float)


def unitary_apply(f: Cochain, coloring: Coloring) -> Cochain:
    coloring.check(f.complex.graph)
    s = sign_vector(f.complex, f.k, coloring)
    return Cochain(f.complex, f.k, f.flavor, s * f.values)


def parity_shift(simplex: Sequence, i: int, coloring: Coloring) -> int:
    """``eps(pi_{c,i}) - eps(pi_c) mod 2`` for the face omitting position ``i``."""
    cols = [coloring[x] for x in simplex]
    face = cols[:i] + cols[i + 1:]
    return (permutation_parity(face) - permutation_parity(cols)) % 2


def color_rank(simplex: Sequence, i: int, coloring: Coloring) -> int:
    ci = coloring[simplex[i]]
    return sum(1 for x in simplex if coloring[x] < ci)


def parity_check(simplex: Sequence, i: int, coloring: Coloring) -> bool:
    """Whether ``eps(pi_{c,i}) = eps(pi_c) + i (mod 2)`` holds for this face."""
    return parity_shift(simplex, i, coloring) == i % 2


def _maxabs(mat) -> float:
    if sp.issparse(mat):
        mat = mat.tocoo()
        return float(np.abs(mat.data).max()) if mat.nnz else 0.0
    return float(np.max(np.abs(mat), initial=0.0))


def _spectrum(cx, k, flavor):
    lap = laplacian_block(cx, k, flavor).matrix.toarray()
    m = cx.weight_arrays[k]
    if m.size == 0:
        return np.zeros(0)
    gram = np.diag(m) @ lap
    return la.eigh(0.5 * (gram + gram.conj().T), np.diag(m), eigvals_only=True)


def intertwine_residuals(cx: WeightedComplex, coloring: Coloring) -> dict:
    """Per-degree residuals of the colour unitary as a skew-to-sym intertwiner.

    For each ``k`` returns max-abs entries of ``U_k d_skew - d_sym U_{k-1}``
    (``"d"``), ``U_{k-1} delta_skew - delta_sym U_k`` (``"delta"``),
    ``U_k Delta_skew U_k^{-1} - Delta_sym`` (``"laplacian"``), the same for
    the normalized blocks (``"normalized"``), the largest gap between sorted
    spectra (``"spectrum"``) and the kernel dimensions of both flavours.
    """
    coloring.check(cx.graph)
    signs = [sp.diags(sign_vector(cx, k, coloring)) for k in range(cx.n + 1)]
    out = {}
    for k in range(cx.n + 1):
        rec = {}
        if k >= 1:
            ds, dy = coboundary(cx, k, "skew"), coboundary(cx, k, "sym")
            rec["d"] = _maxabs(signs[k] @ ds.matrix - dy.matrix @ signs[k - 1])
            rec["delta"] = _maxabs(signs[k - 1] @ adjoint(ds).matrix - adjoint(dy).matrix @ signs[k])
        ls, ly = laplacian_block(cx, k, "skew").matrix, laplacian_block(cx, k, "sym").matrix
        rec["laplacian"] = _maxabs(signs[k] @ ls @ signs[k] - ly)
        ns, ny = normalized_block(cx, k, "skew").matrix, normalized_block(cx, k, "sym").matrix
        rec["normalized"] = _maxabs(signs[k] @ ns @ signs[k] - ny)
        es, ey = _spectrum(cx, k, "skew"), _spectrum(cx, k, "sym")
        rec["spectrum"] = float(np.max(np.abs(es - ey), initial=0.0))
        rec["kernel_skew"] = int(np.sum(np.abs(es) < 1e-9))
        rec["kernel_sym"] = int(np.sum(np.abs(ey) < 1e-9))
        out[k] = rec
    return out


def bipartite_gauge(cx: WeightedComplex, coloring: Coloring):
    """Diagonal signs ``(u0, u1)`` with ``u1 d_skew u0 = d_sym`` on a 2-coloured graph.

    ``u0(x) = (-1)^c(x)`` and ``u1([x, y]) = u0(y)`` for canonical ``x < y``.
    Only degrees 0 and 1 are covered.
    """
    coloring.check(cx.graph)
    if coloring.p != 2:
        raise ColoringError("bipartite gauge needs a 2-colouring")
    u0 = np.array([(-1.0) ** coloring[x] for (x,) in cx.simplices[0]])
    idx = cx.index[0]
    u1 = np.array([u0[idx[(y,)]] for (_, y) in cx.simplices[1]])
    return u0, u1
