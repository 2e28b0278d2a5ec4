"""Small dense Hermitian eigensolver (cyclic Jacobi) and an iterative norm estimator."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass
class HermitianMatrix:
    """Dense Hermitian matrix; symmetrized on construction.

    ``asymmetry`` records ``max|A - A^H|`` of the input.  Inputs further
    than ``1e-12`` from Hermitian are rejected.
    """

    entries: np.ndarray
    asymmetry: float = field(init=False, default=0.0)

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        dev = float(np.max(np.abs(a - a.conj().T), initial=0.0))
        scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
        if dev > 1e-12 * scale:
            raise ValueError(f"matrix is not Hermitian (max|A - A^H| = {dev:.3e})")
        self.entries = 0.5 * (a + a.conj().T)
        self.asymmetry = dev

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    residual: float
    sweeps: int = 0
    eigenvectors: np.ndarray | None = field(default=None, repr=False)


def _rotate(a: np.ndarray, v: np.ndarray | None, p: int, q: int) -> None:
    """One Jacobi rotation annihilating ``a[..., p, q]`` across a stack, in place."""
    apq = a[:, p, q]
    r = np.abs(apq)
    app = a[:, p, p].real
    aqq = a[:, q, q].real
    # entries negligible next to the diagonal are dropped (classic threshold)
    negligible = r <= np.maximum(1e-300, 1e-18 * (np.abs(app) + np.abs(aqq)))
    a[negligible, p, q] = 0.0
    a[negligible, q, p] = 0.0
    active = ~negligible
    if not np.any(active):
        return
    safe_r = np.where(active, r, 1.0)
    phase = np.where(active, apq.real / safe_r + 1j * (apq.imag / safe_r), 1.0)
    theta = (aqq - app) / (2.0 * safe_r)
    t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(theta == 0.0, 1.0, t)
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # R = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
    rpp = c.astype(complex)
    rpq = s.astype(complex)
    rqp = -s * np.conj(phase)
    rqq = c * np.conj(phase)
    colp = a[:, :, p].copy()
    colq = a[:, :, q].copy()
    a[:, :, p] = colp * rpp[:, None] + colq * rqp[:, None]
    a[:, :, q] = colp * rpq[:, None] + colq * rqq[:, None]
    rowp = a[:, p, :].copy()
    rowq = a[:, q, :].copy()
    a[:, p, :] = np.conj(rpp)[:, None] * rowp + np.conj(rqp)[:, None] * rowq
    a[:, q, :] = np.conj(rpq)[:, None] * rowp + np.conj(rqq)[:, None] * rowq
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    if v is not None:
        vp = v[:, :, p].copy()
        vq = v[:, :, q].copy()
        v[:, :, p] = vp * rpp[:, None] + vq * rqp[:, None]
        v[:, :, q] = vp * rpq[:, None] + vq * rqq[:, None]


def _offdiag(a: np.ndarray) -> np.ndarray:
    mask = ~np.eye(a.shape[-1], dtype=bool)
    return np.sqrt(np.sum(np.abs(a[:, mask]) ** 2, axis=1))


def jacobi_stack(stack: np.ndarray, tol: float = 1e-11, max_sweeps: int | None = None,
                 vectors: bool = False):
    """Cyclic Jacobi on a ``(B, N, N)`` stack of Hermitian matrices.

    Stops once the off-diagonal Frobenius norm of every matrix is at most
    ``tol * max(1, |A|_F)``; by Weyl's inequality that bounds each
    eigenvalue error.  Returns ``(eigenvalues, vectors_or_None, sweeps)``
    with eigenvalues ascending along the last axis.
    """
    a = np.array(stack, dtype=complex, copy=True)
    if a.ndim == 2:
        a = a[None]
    b, n, _ = a.shape
    if max_sweeps is None:
        max_sweeps = 100 * max(n, 1)
    v = np.broadcast_to(np.eye(n, dtype=complex), (b, n, n)).copy() if vectors else None
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2))))
    sweeps = 0
    while True:
        off = _offdiag(a)
        if np.all(off <= tol * scale):
            break
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps", residual=float(np.max(off))
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
        sweeps += 1
    w = np.einsum("bii->bi", a).real.copy()
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    if v is not None:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v, sweeps


def eig_hermitian(A, tol: float = 1e-11, max_sweeps: int | None = None) -> SpectrumResult:
    """Ascending eigenvalues of a Hermitian matrix with the max eigenpair residual."""
    h = A if isinstance(A, HermitianMatrix) else HermitianMatrix(np.asarray(A))
    if h.dim == 0:
        raise ValueError("empty matrix")
    w, v, sweeps = jacobi_stack(h.entries, tol=tol, max_sweeps=max_sweeps, vectors=True)
    w, v = w[0], v[0]
    resid = float(np.max(np.linalg.norm(h.entries @ v - v * w[None, :], axis=0)))
    scale = max(1.0, float(np.linalg.norm(h.entries)))
    if resid > max(tol, 1e-14) * scale * 10:
        raise ConvergenceError(f"eigenpair residual {resid:.3e} above tolerance", residual=resid)
    return SpectrumResult(w, resid, sweeps, v)


def eigvalsh_stack(stack: np.ndarray, tol: float = 1e-11) -> np.ndarray:
    w, _, _ = jacobi_stack(stack, tol=tol)
    return w


def _as_operator(A):
    """Return ``(matvec, metric, dim)`` for a MetricOperator, sparse or dense input."""
    metric = getattr(A, "codomain_metric", None)
    mat = getattr(A, "matrix", A)
    if not sp.issparse(mat):
        mat = np.asarray(mat)
    dim = mat.shape[0]
    if metric is None or np.size(metric) != dim:
        metric = np.ones(dim)
    return (lambda x: mat @ x), np.asarray(metric, dtype=float), dim


def operator_norm(A, tol: float = 1e-8, max_iter: int = 100_000, seed: int = 0,
                  restarts: int = 2) -> float:
    """Norm of an operator that is self-adjoint in its weighted metric.

    Power iteration on ``A*A`` with Rayleigh quotients in the metric; stops
    when the relative eigen-residual drops below ``tol``.  ``restarts``
    independent random starts guard against a start vector orthogonal to
    the top eigenspace; the largest estimate wins.
    """
    matvec, m, dim = _as_operator(A)
    if dim == 0:
        return 0.0
    rng = np.random.default_rng(seed)

    def wnorm(x):
        return float(np.sqrt(np.sum(m * np.abs(x) ** 2)))

    best = 0.0
    for _ in range(max(1, restarts)):
        x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        x /= wnorm(x)
        mu = 0.0
        for _ in range(max_iter):
            y = matvec(x)
            ny = wnorm(y)
            if ny == 0.0:
                mu = 0.0
                break
            z = matvec(y)
            mu = ny * ny
            r = wnorm(z - mu * x)
            nz = wnorm(z)
            x = z / nz
            if r <= tol * mu:
                mu = float(np.sum(m * np.abs(matvec(x)) ** 2))
                break
        else:
            raise ConvergenceError(f"power iteration did not converge in {max_iter} steps",
                                   residual=r / mu if mu else None)
        best = max(best, float(np.sqrt(mu)))
    return best
