"""Coboundaries, weighted adjoints and Hodge Laplacian blocks.

Operators are sparse matrices on canonical-simplex coordinates together with
the diagonal weights of their domain and codomain.  Degrees are indexed by
the target: ``coboundary(cx, k)`` is ``d^k``, mapping
``(k-1)``-cochains to ``k``-cochains, and

    Delta_k = d^k delta^k + delta^{k+1} d^{k+1}

with ``delta^0 = 0`` and ``d^{n+1} = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .cochains import Cochain, WeightedMetric, check_flavor, orientation_sign
from .complex import WeightedComplex, line_complex


@dataclass
class MetricOperator:
    """Linear map between weighted cochain spaces.

    ``domain_metric`` and ``codomain_metric`` are the diagonal weights; the
    adjoint is ``M_dom^{-1} A^H M_cod``.
    """

    domain_degree: int
    codomain_degree: int
    flavor: str
    matrix: sp.csr_matrix
    domain_metric: np.ndarray
    codomain_metric: np.ndarray
    label: str = field(default="", compare=False)

    @property
    def shape(self):
        return self.matrix.shape

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def __matmul__(self, other):
        if isinstance(other, MetricOperator):
            return compose(self, other)
        if isinstance(other, Cochain):
            return Cochain(other.complex, self.codomain_degree, self.flavor,
                           np.asarray(self.matrix @ other.values.astype(complex)))
        return self.matrix @ other

    def __add__(self, other: "MetricOperator") -> "MetricOperator":
        if self.matrix.shape != other.matrix.shape:
            raise ValueError("shape mismatch")
        return MetricOperator(self.domain_degree, self.codomain_degree, self.flavor,
                              (self.matrix + other.matrix).tocsr(),
                              self.domain_metric, self.codomain_metric)

    def adjoint(self) -> "MetricOperator":
        return adjoint(self)

    def inner(self, u: np.ndarray, v: np.ndarray, side: str = "codomain") -> complex:
        m = self.codomain_metric if side == "codomain" else self.domain_metric
        return complex(np.sum(m * u * np.conj(v)))


def compose(a: MetricOperator, b: MetricOperator) -> MetricOperator:
    return MetricOperator(b.domain_degree, a.codomain_degree, a.flavor,
                          (a.matrix @ b.matrix).tocsr(), b.domain_metric, a.codomain_metric)


def adjoint(op: MetricOperator) -> MetricOperator:
    """Adjoint with respect to the carried weighted inner products."""
    inv_dom = sp.diags(1.0 / op.domain_metric) if op.domain_metric.size else sp.csr_matrix((0, 0))
    mat = inv_dom @ op.matrix.conj().T @ sp.diags(op.codomain_metric)
    return MetricOperator(op.codomain_degree, op.domain_degree, op.flavor,
                          sp.csr_matrix(mat, dtype=complex),
                          op.codomain_metric, op.domain_metric)


def _zero(cx: WeightedComplex, dom: int, cod: int, flavor: str) -> MetricOperator:
    return MetricOperator(dom, cod, flavor,
                          sp.csr_matrix((cx.size(cod), cx.size(dom)), dtype=complex),
                          WeightedMetric.of(cx, dom).diag, WeightedMetric.of(cx, cod).diag)


def coboundary(cx: WeightedComplex, k: int, flavor: str = "skew") -> MetricOperator:
    """``d^k``: ``(k-1)``-cochains to ``k``-cochains, ``1 <= k <= n``.

    On a canonical simplex the ``i``-th facet is canonical too, so the
    entries are ``(-1)^i`` (skew) or ``1`` (sym) with no further parity.
    """
    check_flavor(flavor)
    if not 1 <= k <= cx.n:
        raise ValueError(f"coboundary degree k={k} outside 1..{cx.n}")
    rows, cols, vals = [], [], []
    col_index = cx.index[k - 1]
    for r, s in enumerate(cx.simplices[k]):
        for i, t in enumerate(cx.faces[k][s]):
            rows.append(r)
            cols.append(col_index[t])
            vals.append((-1.0) ** i if flavor == "skew" else 1.0)
    mat = sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)),
                        shape=(cx.size(k), cx.size(k - 1)))
    return MetricOperator(k - 1, k, flavor, mat, cx.weight_arrays[k - 1], cx.weight_arrays[k],
                          label=f"d^{k}_{flavor}")


def codifferential(cx: WeightedComplex, k: int, flavor: str = "skew") -> MetricOperator:
    """``delta^k`` assembled from the local extension-sum formula.

    ``(delta g)(t) = (sign/m(t)) * sum_z m(t + z) g([t, z])``.  For the skew
    flavour the sign is ``(-1)^k``: moving ``z`` from its sorted slot to the
    end of the tuple is what the evaluation ``g([t, z])`` accounts for, and
    the remaining ``(-1)^k`` comes from the alternating coboundary.  This is
    an independent route to :func:`adjoint` of :func:`coboundary`.
    """
    check_flavor(flavor)
    if not 1 <= k <= cx.n:
        raise ValueError(f"codifferential degree k={k} outside 1..{cx.n}")
    outer = (-1.0) ** k if flavor == "skew" else 1.0
    rows, cols, vals = [], [], []
    idx_k = cx.index[k]
    for r, t in enumerate(cx.simplices[k - 1]):
        mt = float(cx.weight(k - 1, t))
        for z in cx.extensions(k, t):
            tup = t + (z,)
            s = tuple(sorted(tup))
            rows.append(r)
            cols.append(idx_k[s])
            vals.append(outer * orientation_sign(tup, flavor) * float(cx.weight(k, s)) / mt)
    mat = sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)),
                        shape=(cx.size(k - 1), cx.size(k)))
    return MetricOperator(k, k - 1, flavor, mat, cx.weight_arrays[k], cx.weight_arrays[k - 1],
                          label=f"delta^{k}_{flavor}")


def down_laplacian(cx: WeightedComplex, k: int, flavor: str = "skew") -> MetricOperator:
    if k == 0:
        return _zero(cx, 0, 0, flavor)
    d = coboundary(cx, k, flavor)
    return compose(d, adjoint(d))


def up_laplacian(cx: WeightedComplex, k: int, flavor: str = "skew") -> MetricOperator:
    if k == cx.n:
        return _zero(cx, k, k, flavor)
    d = coboundary(cx, k + 1, flavor)
    return compose(adjoint(d), d)


def laplacian_block(cx: WeightedComplex, k: int, flavor: str = "skew") -> MetricOperator:
    """``Delta_k``, self-adjoint on ``l2(m_k)``."""
    check_flavor(flavor)
    if not 0 <= k <= cx.n:
        raise ValueError(f"degree k={k} outside 0..{cx.n}")
    op = down_laplacian(cx, k, flavor) + up_laplacian(cx, k, flavor)
    op.label = f"Delta_{k},{flavor}"
    return op


def _unit(cx, k, flavor, mat, label):
    ones = np.ones(cx.size(k))
    return MetricOperator(k, k, flavor, sp.csr_matrix(mat, dtype=complex), ones, ones, label=label)


def normalized_block(cx: WeightedComplex, k: int, flavor: str = "skew",
                     via: str = "form") -> MetricOperator:
    """Degree-normalized block acting on unweighted coordinates.

    ``via="form"`` sums the two Gram pieces
    ``M^{-1/2} B^H M_{k-1} B M^{-1/2}`` (``B = delta^k``) and
    ``M^{-1/2} D^H M_{k+1} D M^{-1/2}`` (``D = d^{k+1}``).
    ``via="similarity"`` conjugates ``Delta_k`` by the unitary
    ``l2(m_k) -> l2``, i.e. ``M^{1/2} Delta_k M^{-1/2}``.  The two agree.
    """
    check_flavor(flavor)
    m = cx.weight_arrays[k]
    half, inv_half = sp.diags(np.sqrt(m)), sp.diags(1.0 / np.sqrt(m))
    if via == "similarity":
        mat = half @ laplacian_block(cx, k, flavor).matrix @ inv_half
        return _unit(cx, k, flavor, mat, f"Delta~_{k},{flavor}")
    if via != "form":
        raise ValueError(f"via must be 'form' or 'similarity', got {via!r}")
    mat = sp.csr_matrix((cx.size(k), cx.size(k)), dtype=complex)
    if k >= 1:
        b = adjoint(coboundary(cx, k, flavor)).matrix
        mat = mat + inv_half @ b.conj().T @ sp.diags(cx.weight_arrays[k - 1]) @ b @ inv_half
    if k < cx.n:
        d = coboundary(cx, k + 1, flavor).matrix
        mat = mat + inv_half @ d.conj().T @ sp.diags(cx.weight_arrays[k + 1]) @ d @ inv_half
    return _unit(cx, k, flavor, mat, f"Delta~_{k},{flavor}")


def normalized_parts(cx: WeightedComplex, k: int, flavor: str = "skew"):
    """``(L_down, L_up)`` normalized pieces on unweighted coordinates."""
    m = cx.weight_arrays[k]
    half, inv_half = sp.diags(np.sqrt(m)), sp.diags(1.0 / np.sqrt(m))
    down = half @ down_laplacian(cx, k, flavor).matrix @ inv_half
    up = half @ up_laplacian(cx, k, flavor).matrix @ inv_half
    return (_unit(cx, k, flavor, down, f"L-_{k}"), _unit(cx, k, flavor, up, f"L+_{k}"))


def _random_unit(rng, metric: np.ndarray) -> np.ndarray:
    v = rng.standard_normal(metric.size) + 1j * rng.standard_normal(metric.size)
    nrm = np.sqrt(np.sum(metric * np.abs(v) ** 2))
    return v / nrm if nrm > 0 else v


def energy_identity_check(cx: WeightedComplex, k: int, flavor: str = "skew",
                          trials: int = 100, seed: int = 0) -> float:
    """Max over random unit ``u`` of ``|<Delta u,u> - |delta u|^2 - |d u|^2|``."""
    rng = np.random.default_rng(seed)
    lap = laplacian_block(cx, k, flavor)
    m_k = cx.weight_arrays[k]
    delta = adjoint(coboundary(cx, k, flavor)) if k >= 1 else None
    d_up = coboundary(cx, k + 1, flavor) if k < cx.n else None
    worst = 0.0
    for _ in range(trials):
        u = _random_unit(rng, m_k)
        lhs = np.sum(m_k * (lap.matrix @ u) * np.conj(u))
        rhs = 0.0
        if delta is not None:
            rhs += np.sum(cx.weight_arrays[k - 1] * np.abs(delta.matrix @ u) ** 2)
        if d_up is not None:
            rhs += np.sum(cx.weight_arrays[k + 1] * np.abs(d_up.matrix @ u) ** 2)
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def adjointness_residual(cx: WeightedComplex, k: int, flavor: str = "skew",
                         trials: int = 100, seed: int = 0) -> float:
    """Max over random unit ``f, g`` of ``|<d^k f, g>_k - <f, delta^k g>_{k-1}|``."""
    rng = np.random.default_rng(seed)
    d = coboundary(cx, k, flavor)
    delta = adjoint(d)
    worst = 0.0
    for _ in range(trials):
        f = _random_unit(rng, d.domain_metric)
        g = _random_unit(rng, d.codomain_metric)
        lhs = np.sum(d.codomain_metric * (d.matrix @ f) * np.conj(g))
        rhs = np.sum(d.domain_metric * f * np.conj(delta.matrix @ g))
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def dd_norm(cx: WeightedComplex, k: int, flavor: str = "skew") -> float:
    """Max-abs entry of ``d^{k+1} d^k`` (zero for skew; generally not for sym)."""
    if not 1 <= k < cx.n:
        return 0.0
    prod = coboundary(cx, k + 1, flavor).matrix @ coboundary(cx, k, flavor).matrix
    return float(abs(prod).max()) if prod.nnz else 0.0


def apply_laplacian_local(cx: WeightedComplex, k: int, flavor: str, f: Cochain, tup):
    """``(Delta_k f)(tup)`` from the local extension-sum formulas.

    Works in the arithmetic of the weights and values, so Fraction inputs
    give exact results.  Signs: the down part carries ``(-1)^(i+k)`` and the
    up part ``(-1)^(j+k+1)``; these are the signs that make both parts
    nonnegative (see :func:`codifferential`).
    """
    check_flavor(flavor)
    tup = tuple(tup)
    skew = flavor == "skew"
    total = 0
    if k >= 1:
        for i in range(k + 1):
            face = tup[:i] + tup[i + 1:]
            sgn = (-1) ** (i + k) if skew else 1
            mf = cx.weight(k - 1, face)
            inner = 0
            for z in cx.extensions(k, face):
                inner += cx.weight(k, face + (z,)) * f.evaluate(face + (z,))
            total += sgn * inner / mf
    if k < cx.n:
        ms = cx.weight(k, tup)
        inner = 0
        for z in cx.extensions(k + 1, tup):
            big = tup + (z,)
            acc = 0
            for j in range(k + 2):
                sgn = (-1) ** (j + k + 1) if skew else 1
                acc += sgn * f.evaluate(big[:j] + big[j + 1:])
            inner += cx.weight(k + 1, big) * acc
        total += inner / ms
    return total


@dataclass
class TopReduction:
    """Conjugated top block ``U Delta_n U^{-1}`` split into adjacency and potential.

    ``signs`` holds the orientation signs predicted from facet positions;
    ``kernel`` is the nonnegative adjacency kernel ``w``.
    """

    nodes: list
    kernel: sp.csr_matrix
    potential: np.ndarray
    scaling: np.ndarray
    signs: sp.csr_matrix
    conjugated: sp.csr_matrix

    def residual(self) -> float:
        """Max-abs entry of ``U Delta U^{-1} - (signs*w + diag V)``."""
        model = self.signs.multiply(self.kernel) + sp.diags(self.potential)
        diff = (self.conjugated - model).tocoo()
        return float(np.abs(diff.data).max()) if diff.nnz else 0.0

    def abs_residual(self) -> float:
        """Compare off-diagonal magnitudes with ``w`` and the diagonal with ``V``."""
        c = self.conjugated.tocsr().copy()
        diag = c.diagonal()
        off = c - sp.diags(diag)
        diff = (abs(off) - self.kernel).tocoo()
        r = float(np.abs(diff.data).max()) if diff.nnz else 0.0
        return max(r, float(np.max(np.abs(diag - self.potential), initial=0.0)))

    def gauge(self):
        """Diagonal ``+-1`` making every off-diagonal entry ``-w``, or ``None``.

        Exists exactly when the top simplices can be oriented coherently
        across all shared facets.
        """
        target = -1.0
        n = len(self.nodes)
        eps = np.zeros(n)
        s = self.signs.tocsr()
        for start in range(n):
            if eps[start]:
                continue
            eps[start] = 1.0
            stack = [start]
            while stack:
                i = stack.pop()
                for ptr in range(s.indptr[i], s.indptr[i + 1]):
                    j, sg = s.indices[ptr], s.data[ptr].real
                    want = target / (eps[i] * sg)
                    if eps[j] == 0:
                        eps[j] = want
                        stack.append(j)
                    elif eps[j] != want:
                        return None
        return eps


def top_reduction(cx: WeightedComplex, flavor: str = "skew") -> TopReduction:
    check_flavor(flavor)
    n = cx.n
    lc = line_complex(cx)
    idx = cx.index[n]
    m = cx.weight_arrays[n]
    N = len(lc.nodes)
    rows, cols, wv, sv = [], [], [], []
    for s in lc.nodes:
        i = idx[s]
        for r, t in lc.adjacency[s]:
            j = idx[r]
            rows.append(i)
            cols.append(j)
            wv.append(lc.w[(s, r) if s < r else (r, s)])
            if flavor == "skew":
                pos_s = cx.faces[n][s].index(t)
                pos_r = cx.faces[n][r].index(t)
                sv.append((-1.0) ** (pos_s + pos_r))
            else:
                sv.append(1.0)
    kernel = sp.csr_matrix((wv, (rows, cols)), shape=(N, N))
    signs = sp.csr_matrix((np.array(sv, dtype=complex), (rows, cols)), shape=(N, N))
    potential = np.array([float(lc.q[s]) for s in cx.simplices[n]])
    scale = np.sqrt(m)
    conj = (sp.diags(scale) @ laplacian_block(cx, n, flavor).matrix @ sp.diags(1.0 / scale)).tocsr()
    return TopReduction(list(cx.simplices[n]), kernel, potential, scale, signs, conj)


def coherent_orientation(oriented: tuple, neighbor: tuple) -> tuple:
    """Order ``neighbor`` so it induces the opposite orientation on the shared facet.

    ``oriented`` is a top simplex in a chosen vertex order; ``neighbor``
    shares all but one of its vertices.
    """
    extra = [z for z in neighbor if z not in oriented]
    missing = [x for x in oriented if x not in neighbor]
    if len(extra) != 1 or len(missing) != 1:
        raise ValueError(f"{neighbor!r} does not share a facet with {oriented!r}")
    i = oriented.index(missing[0])
    face = oriented[:i] + oriented[i + 1:]
    out = [extra[0], *face]
    if i % 2 == 0:
        out[0], out[1] = out[1], out[0]
    return tuple(out)
