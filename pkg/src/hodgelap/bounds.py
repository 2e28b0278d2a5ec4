"""Explicit operator-norm bounds and certification reports.

``certificates`` in a :class:`BoundReport` are bounds with a valid proof
and decide the verdict.  ``stated`` holds bounds that are recorded for
comparison only: the ``D_down + D_up`` form bound (violated already by a
single edge at ``k = 0``) and the weighted ``C_w`` bound (not invariant
under rescaling all weights).
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .complex import WeightedComplex, WeightedGraph, build_complex, line_complex, up_down_degrees
from .hodge import normalized_block
from .spectral import operator_norm

MARGIN_TOL = 1e-8


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


@dataclass(frozen=True)
class ComparabilityConstants:
    """Uniform bounds ``c0 <= m0 <= C0`` and ``c1 <= m1 <= C1``."""

    c0: Fraction
    C0: Fraction
    c1: Fraction
    C1: Fraction

    def __post_init__(self):
        for name in ("c0", "C0", "c1", "C1"):
            object.__setattr__(self, name, _exact(getattr(self, name)))
        if not (0 < self.c0 <= self.C0 and 0 < self.c1 <= self.C1):
            raise ValueError(f"need 0 < c0 <= C0 and 0 < c1 <= C1, got {self}")

    @classmethod
    def of(cls, graph: WeightedGraph) -> "ComparabilityConstants":
        m0 = [_exact(w) for w in graph.m0.values()]
        m1 = [_exact(w) for w in graph.m1.values()] or [Fraction(1)]
        return cls(min(m0), max(m0), min(m1), max(m1))


def weighted_constant(c: ComparabilityConstants) -> Fraction:
    """``C_w = 2 (C1/c1) max(1, C0/c0)``, exactly."""
    return 2 * (c.C1 / c.c1) * max(Fraction(1), c.C0 / c.c0)


def weighted_bound(c: ComparabilityConstants, line_degree: int) -> Fraction:
    return weighted_constant(c) * line_degree


def adjacency_constant(c: ComparabilityConstants) -> Fraction:
    """The adjacency prefactor ``C' = C1/c1``, reported apart from ``C_w``."""
    return c.C1 / c.c1


def schur_bound(kernel) -> float:
    """Max row sum of a symmetric nonnegative kernel; bounds the adjacency norm."""
    if hasattr(kernel, "w") and hasattr(kernel, "nodes"):
        return max((kernel.degree(s) for s in kernel.nodes), default=0.0)
    mat = sp.csr_matrix(kernel)
    if mat.nnz and mat.data.real.min() < 0:
        raise ValueError("kernel has negative entries")
    if mat.nnz and np.max(np.abs(mat.data.imag)) > 0:
        raise ValueError("kernel must be real")
    if abs(mat - mat.T).sum() > 1e-12 * max(1.0, abs(mat).sum()):
        raise ValueError("kernel is not symmetric")
    if mat.shape[0] == 0:
        return 0.0
    return float(np.max(np.asarray(mat.sum(axis=1)).ravel().real))


def form_bound(cx: WeightedComplex, k: int):
    """``D_down + D_up`` at degree ``k``; not a valid bound (one edge at ``k = 0`` has norm 2)."""
    down, up = up_down_degrees(cx, k)
    return down + up


def schur_form_bound(cx: WeightedComplex, k: int):
    """``(k+1) D_down + (k+2) D_up``, a valid bound for the normalized block.

    Each ``k``-simplex has ``k+1`` facets and each ``(k+1)``-simplex
    ``k+2``; these multiplicities enter the Cauchy-Schwarz step.
    """
    down, up = up_down_degrees(cx, k)
    return (k + 1) * down + (k + 2) * up


class TopBound(NamedTuple):
    value: float
    adjacency: float
    potential: float
    ratio_bound: float | None
    max_neighbors: int


def top_bound(cx: WeightedComplex, m_bounds: tuple | None = None) -> TopBound:
    """``|D|_inf + |V|_inf`` on the line complex of top simplices.

    With ``m_bounds = (m_minus, m_plus)`` (lower bound on ``m_{n-1}``, upper
    on ``m_n``) also returns ``L m+/m- + (n+1) m+/m-``.
    """
    lc = line_complex(cx)
    adj = schur_bound(lc)
    pot = float(max(float(v) for v in lc.q.values()))
    L = lc.max_degree()
    cor = None
    if m_bounds is not None:
        m_minus, m_plus = m_bounds
        ratio = float(m_plus) / float(m_minus)
        cor = L * ratio + (cx.n + 1) * ratio
    return TopBound(adj + pot, adj, pot, cor, L)


class EdgeBlockBounds(NamedTuple):
    unnormalized: int
    normalized: int
    line_degree: int
    max_degree: int
    degree_unnormalized: int
    degree_normalized: int


def line_graph_degree(graph: WeightedGraph) -> int:
    """Max number of edges sharing an endpoint with a given edge."""
    return max((graph.degree(u) + graph.degree(v) - 2 for u, v in graph.edges), default=0)


def edge_block_bounds(graph: WeightedGraph) -> EdgeBlockBounds:
    """Line-graph bounds ``(2 Delta(L)+2, 2 Delta(L))`` plus the degree forms."""
    dl = line_graph_degree(graph)
    dg = graph.max_degree()
    return EdgeBlockBounds(2 * dl + 2, 2 * dl, dl, dg, 4 * (dg - 1) + 2, 4 * (dg - 1))


@dataclass
class Certificate:
    name: str
    value: float
    basis: str
    margin: float = 0.0


@dataclass
class BoundReport:
    subject: dict
    computed_norm: float
    certificates: list = field(default_factory=list)
    stated: list = field(default_factory=list)
    seed: int = 0
    tol: float = 1e-8
    wall_time: float = 0.0

    @property
    def margins(self) -> dict:
        return {c.name: c.margin for c in self.certificates}

    @property
    def passed(self) -> bool:
        return all(c.margin >= -MARGIN_TOL for c in self.certificates)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def violated_stated(self) -> list:
        return [c.name for c in self.stated if c.margin < -MARGIN_TOL]

    def to_dict(self) -> dict:
        out = asdict(self)
        out["verdict"] = self.verdict
        return out


def _add(report: BoundReport, bucket: str, name: str, value, basis: str):
    value = float(value)
    getattr(report, bucket).append(Certificate(name, value, basis, value - report.computed_norm))


def certify(target, k: int | None = None, flavor: str = "skew", seed: int = 0,
            tol: float = 1e-8, constants: ComparabilityConstants | None = None) -> BoundReport:
    """Compute ``|Delta~_k|`` and every applicable bound for it.

    ``target`` is a :class:`WeightedComplex` or a :class:`WeightedGraph`
    (treated as its 1-dimensional complex, edge block).  ``k`` defaults to
    the top degree.
    """
    t0 = time.perf_counter()
    cx = build_complex(target, 1) if isinstance(target, WeightedGraph) else target
    k = cx.n if k is None else k
    norm = operator_norm(normalized_block(cx, k, flavor), tol=tol, seed=seed)
    report = BoundReport({"degree": k, "flavor": flavor, "normalized": True, "n": cx.n,
                          "counts": cx.counts()}, norm, seed=seed, tol=tol)
    down, up = up_down_degrees(cx, k)
    _add(report, "certificates", "schur_form", schur_form_bound(cx, k),
         "Cauchy-Schwarz with facet multiplicities: (k+1) D_down + (k+2) D_up")
    _add(report, "stated", "form_bound", down + up, "D_down + D_up")
    if k == cx.n and cx.size(k):
        tb = top_bound(cx)
        _add(report, "certificates", "top_line_complex", tb.value,
             "Schur test on the line complex plus diagonal potential")
    if k == cx.n == 1 and cx.size(1):
        graph = cx.graph
        eb = edge_block_bounds(graph)
        if cx.unit_weights():
            _add(report, "certificates", "line_graph_unnormalized", eb.unnormalized,
                 "2 Delta(L(G)) + 2")
            _add(report, "certificates", "line_graph_degree_unnormalized", eb.degree_unnormalized,
                 "4 (Delta(G) - 1) + 2")
            bucket = "certificates" if eb.line_degree >= 2 else "stated"
            _add(report, bucket, "line_graph_normalized", eb.normalized, "2 Delta(L(G))")
        c = constants or ComparabilityConstants.of(graph)
        _add(report, "stated", "weighted_C_w", weighted_bound(c, eb.line_degree),
             "C_w Delta(L(G)), C_w = 2 (C1/c1) max(1, C0/c0)")
    report.wall_time = time.perf_counter() - t0
    return report
