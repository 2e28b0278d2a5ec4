import numpy as np
import pytest
import scipy.sparse as sp

from hodgelap.generators import random_complex
from hodgelap.hodge import laplacian_block, normalized_block
from hodgelap.spectral import (ConvergenceError, HermitianMatrix, eig_hermitian, eigvalsh_stack,
                               jacobi_stack, operator_norm)


def random_hermitian(rng, n, batch=None):
    shape = (n, n) if batch is None else (batch, n, n)
    a = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return a + np.conj(np.swapaxes(a, -1, -2))


@pytest.mark.parametrize("n", [1, 2, 3, 6, 12])
def test_jacobi_matches_numpy(n):
    rng = np.random.default_rng(n)
    stack = random_hermitian(rng, n, batch=50)
    w = eigvalsh_stack(stack)
    ref = np.linalg.eigvalsh(stack)
    assert np.max(np.abs(w - ref)) < 1e-12 * max(1.0, np.abs(ref).max())


def test_eig_hermitian_vectors():
    rng = np.random.default_rng(7)
    a = random_hermitian(rng, 9)
    res = eig_hermitian(a)
    assert np.all(np.diff(res.eigenvalues) >= 0)
    assert res.residual < 1e-10
    v = res.eigenvectors
    assert np.allclose(v.conj().T @ v, np.eye(9), atol=1e-12)


def test_real_symmetric_and_degenerate():
    a = np.diag([2.0, 2.0, 2.0]) + np.ones((3, 3))
    assert np.allclose(eig_hermitian(a).eigenvalues, [2, 2, 5])


def test_tiny_off_diagonal_entries():
    a = np.diag([1.0, 2.0]).astype(complex)
    a[0, 1], a[1, 0] = 5e-324 + 5e-324j, 5e-324 - 5e-324j
    w, _, _ = jacobi_stack(a[None])
    assert np.allclose(w[0], [1, 2])


def test_non_hermitian_rejected():
    with pytest.raises(ValueError, match="not Hermitian"):
        HermitianMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        HermitianMatrix(np.ones((2, 3)))


def test_convergence_error():
    rng = np.random.default_rng(3)
    with pytest.raises(ConvergenceError) as info:
        jacobi_stack(random_hermitian(rng, 5)[None], max_sweeps=0)
    assert info.value.residual > 0


def test_operator_norm_indefinite():
    assert operator_norm(np.diag([1.0, -5.0, 3.0])) == pytest.approx(5.0, rel=1e-8)
    assert operator_norm(sp.csr_matrix((4, 4))) == 0.0
    assert operator_norm(np.zeros((0, 0))) == 0.0


@pytest.mark.parametrize("seed", range(8))
def test_operator_norm_weighted(seed):
    cx = random_complex(seed)
    k = min(1, cx.n)
    lap = laplacian_block(cx, k)
    ref = np.abs(np.linalg.eigvalsh(normalized_block(cx, k).toarray())).max()
    assert operator_norm(lap, seed=seed) == pytest.approx(ref, rel=1e-7)
    assert operator_norm(normalized_block(cx, k), seed=seed) == pytest.approx(ref, rel=1e-7)


def test_operator_norm_deterministic():
    cx = random_complex(4)
    op = normalized_block(cx, 1)
    assert operator_norm(op, seed=3) == operator_norm(op, seed=3)
