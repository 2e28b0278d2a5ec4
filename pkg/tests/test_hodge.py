from fractions import Fraction

import numpy as np
import pytest

from hodgelap.cochains import Cochain
from hodgelap.complex import build_complex
from hodgelap.generators import (complete_graph, cycle_graph, path_graph, random_complex,
                                 tetra_mesh, weighted_tetra)
from hodgelap.hodge import (adjoint, adjointness_residual, apply_laplacian_local, coboundary,
                            codifferential, coherent_orientation, dd_norm, energy_identity_check,
                            laplacian_block, normalized_block, normalized_parts, top_reduction)
from oracles import dense_coboundary, dense_laplacian, perm_sign, weighted_spectrum

SEEDS = range(12)


def test_coboundary_on_an_edge():
    cx = build_complex(path_graph(2), 1)
    f = np.array([2.0, 5.0])
    assert (coboundary(cx, 1, "skew").matrix @ f)[0] == 3.0
    assert (coboundary(cx, 1, "sym").matrix @ f)[0] == 7.0


def test_adjoint_sign_on_k2():
    # delta g(0) = sum over edges [0, z] with weight ratio; for skew the edge [0,1]
    # carries f(1) - f(0), so its adjoint at vertex 0 is -1
    cx = build_complex(path_graph(2), 1)
    g = np.array([1.0])
    assert (adjoint(coboundary(cx, 1, "skew")).matrix @ g)[0] == pytest.approx(-1.0)
    assert (adjoint(coboundary(cx, 1, "sym")).matrix @ g)[0] == pytest.approx(1.0)


def test_k3_delta_at_vertex():
    cx = build_complex(complete_graph(3), 2)
    g = Cochain.indicator(cx, (0, 1), "sym")
    assert (adjoint(coboundary(cx, 1, "sym")).matrix @ g.values)[0] == pytest.approx(1.0)
    g = Cochain.indicator(cx, (0, 1), "skew")
    assert (adjoint(coboundary(cx, 1, "skew")).matrix @ g.values)[0] == pytest.approx(-1.0)


@pytest.mark.parametrize("seed", SEEDS)
def test_coboundary_matches_definition(seed):
    cx = random_complex(seed)
    for k in range(1, cx.n + 1):
        for flavor in ("skew", "sym"):
            assert np.array_equal(coboundary(cx, k, flavor).toarray().real, dense_coboundary(cx, k, flavor))


@pytest.mark.parametrize("seed", SEEDS)
def test_codifferential_is_the_adjoint(seed):
    cx = random_complex(seed)
    for k in range(1, cx.n + 1):
        for flavor in ("skew", "sym"):
            a = adjoint(coboundary(cx, k, flavor)).toarray()
            b = codifferential(cx, k, flavor).toarray()
            assert np.max(np.abs(a - b), initial=0) < 1e-12


@pytest.mark.parametrize("seed", SEEDS)
def test_laplacian_matches_oracle(seed):
    cx = random_complex(seed)
    for k in range(cx.n + 1):
        for flavor in ("skew", "sym"):
            got = laplacian_block(cx, k, flavor).toarray()
            assert np.max(np.abs(got - dense_laplacian(cx, k, flavor)), initial=0) < 1e-10


@pytest.mark.parametrize("seed", SEEDS)
def test_identities(seed):
    cx = random_complex(seed)
    for k in range(cx.n + 1):
        for flavor in ("skew", "sym"):
            assert energy_identity_check(cx, k, flavor, trials=20, seed=seed) < 1e-12
            if k >= 1:
                assert adjointness_residual(cx, k, flavor, trials=20, seed=seed) < 1e-12
        if k < cx.n:
            assert dd_norm(cx, k, "skew") == 0.0


def test_sym_dd_is_nonzero_on_a_triangle():
    cx = build_complex(complete_graph(3), 2)
    assert dd_norm(cx, 1, "sym") == 2.0
    assert dd_norm(cx, 1, "skew") == 0.0


@pytest.mark.parametrize("seed", SEEDS)
def test_normalized_routes_agree(seed):
    cx = random_complex(seed)
    for k in range(cx.n + 1):
        for flavor in ("skew", "sym"):
            a = normalized_block(cx, k, flavor, via="form").toarray()
            b = normalized_block(cx, k, flavor, via="similarity").toarray()
            assert np.max(np.abs(a - b), initial=0) < 1e-12
            assert np.max(np.abs(a - a.conj().T), initial=0) < 1e-12
            down, up = normalized_parts(cx, k, flavor)
            assert np.max(np.abs(down.toarray() + up.toarray() - a), initial=0) < 1e-12
            w = np.linalg.eigvalsh(a) if a.size else np.zeros(0)
            assert np.allclose(w, weighted_spectrum(cx, k, flavor), atol=1e-9)


def test_normalized_rejects_unknown_route():
    with pytest.raises(ValueError):
        normalized_block(build_complex(complete_graph(3), 1), 0, via="other")


def test_k3_spectra():
    cx = build_complex(complete_graph(3), 1)
    assert np.allclose(np.linalg.eigvalsh(laplacian_block(cx, 0, "skew").toarray()), [0, 3, 3])
    assert np.allclose(np.linalg.eigvalsh(laplacian_block(cx, 0, "sym").toarray()), [1, 1, 4])
    filled = build_complex(complete_graph(3), 2)
    assert np.allclose(np.linalg.eigvalsh(laplacian_block(filled, 1, "skew").toarray()), [3, 3, 3])


def test_cycle_kernel_dimensions():
    # one loop: skew edge block has a one-dimensional harmonic space
    cx = build_complex(cycle_graph(6), 2)
    w = np.linalg.eigvalsh(laplacian_block(cx, 1, "skew").toarray())
    assert np.sum(np.abs(w) < 1e-10) == 1


@pytest.mark.parametrize("seed", range(6))
def test_local_formula_matches_matrix(seed):
    cx = random_complex(seed)
    rng = np.random.default_rng(seed)
    for k in range(cx.n + 1):
        for flavor in ("skew", "sym"):
            f = Cochain(cx, k, flavor, rng.standard_normal(cx.size(k)) + 0j)
            lap = laplacian_block(cx, k, flavor).matrix @ f.values
            for s in cx.simplices[k][:5]:
                tup = s[::-1]
                got = apply_laplacian_local(cx, k, flavor, f, tup)
                sign = 1 if flavor == "sym" else (-1) ** (len(s) * (len(s) - 1) // 2)
                assert got == pytest.approx(sign * lap[cx.index[k][s]], abs=1e-10)


def test_worked_tetra_exact():
    cx, sigma, _, u = weighted_tetra()
    value = apply_laplacian_local(cx, 3, "skew", u, sigma)
    assert value == Fraction(31, 2)
    assert isinstance(value, Fraction)


def test_worked_tetra_matrix_route():
    cx, sigma, _, u = weighted_tetra()
    f = np.array([float(x) for x in u.values])
    lap = laplacian_block(cx, 3, "skew").matrix @ f
    assert lap[cx.index[3][sigma]].real == pytest.approx(15.5, abs=1e-12)


def test_unit_mesh_interior_formula():
    cx = tetra_mesh(3)
    red = top_reduction(cx)
    interior = [i for i, s in enumerate(red.nodes) if red.kernel[i].nnz == 4]
    assert interior
    rng = np.random.default_rng(1)
    u = rng.standard_normal(cx.size(3))
    eps = red.gauge()
    assert eps is not None
    # in a coherent orientation the block is 4 u(s) - sum of neighbour values
    lap = (np.diag(eps) @ laplacian_block(cx, 3).toarray() @ np.diag(eps)).real
    i = interior[0]
    nbrs = red.kernel[i].indices
    assert lap[i] @ u == pytest.approx(4 * u[i] - u[nbrs].sum(), abs=1e-12)


@pytest.mark.parametrize("seed", SEEDS)
def test_top_reduction(seed):
    cx = random_complex(seed)
    if not cx.size(cx.n):
        pytest.skip("no top simplices")
    for flavor in ("skew", "sym"):
        red = top_reduction(cx, flavor)
        assert red.residual() < 1e-12
        assert red.abs_residual() < 1e-12


def test_coherent_orientation():
    sigma = (0, 1, 2, 3)
    for i in range(4):
        face = sigma[:i] + sigma[i + 1:]
        r = coherent_orientation(sigma, tuple(sorted(face + (9,))))
        # induced orientations on the shared face are opposite
        j = r.index(9)
        own = (-1) ** i
        other = (-1) ** j
        rest = [x for x in r if x != 9]
        assert own * other * perm_sign([face.index(x) for x in rest]) == -1
    with pytest.raises(ValueError):
        coherent_orientation(sigma, (4, 5, 6, 7))
