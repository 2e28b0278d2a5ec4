import numpy as np
import pytest

from hodgelap.bloch import (LATTICES, PeriodicCell, bz_maximum, catalog,
                            cell_from_dict, compare_table, symbol, symbol_stack, theta_grid,
                            top_eigenvalues, torus_bloch_spectrum, torus_complex, torus_graph,
                            variant_table)
from hodgelap.hodge import normalized_block

PI = np.pi


@pytest.mark.parametrize("name, d, n1, tri", [
    ("line", 2, 1, 0), ("square", 4, 2, 0), ("triangular", 6, 3, 2), ("cubic", 6, 3, 0),
    ("bcc", 8, 4, 0), ("fcc", 12, 6, 8), ("kagome", 4, 6, 2), ("hypercubic4", 8, 4, 0),
    ("diamond", 4, 4, 0),
])
def test_catalog(name, d, n1, tri):
    cell = catalog(name)
    assert cell.degree() == d
    assert cell.n_edges == n1
    assert len(cell.triangles) == tri


def test_bipartite_lattices():
    assert catalog("bcc").bipartite()
    assert catalog("diamond").bipartite()
    assert not catalog("triangular").bipartite()


def test_unknown_lattice():
    with pytest.raises(KeyError):
        catalog("honeycomb-ish")


def test_cell_validation():
    with pytest.raises(ValueError, match="self-loop"):
        PeriodicCell("x", 1, ("A",), [("A", "A", (0,))])
    with pytest.raises(ValueError, match="twice"):
        PeriodicCell("x", 1, ("A",), [("A", "A", (1,)), ("A", "A", (-1,))])
    with pytest.raises(ValueError, match="unknown vertex"):
        PeriodicCell("x", 1, ("A",), [("A", "B", (1,))])


def test_square_symbol_at_corner():
    s = symbol(catalog("square"), (PI, PI))
    assert np.allclose(np.linalg.eigvalsh(s.matrix.entries), [0, 8])


def test_cubic_symbol_band():
    cell = catalog("cubic")
    s = symbol(cell, (PI, PI, PI))
    assert np.linalg.eigvalsh(s.matrix.entries).max() == pytest.approx(12)
    rng = np.random.default_rng(0)
    for theta in rng.uniform(0, 2 * PI, size=(20, 3)):
        w = np.linalg.eigvalsh(symbol(cell, theta).matrix.entries)
        assert w.max() == pytest.approx(2 * (3 - np.cos(theta).sum()), abs=1e-12)


@pytest.mark.parametrize("name", LATTICES)
def test_symbol_psd_and_gauge_kernel(name):
    cell = catalog(name)
    pts = theta_grid(cell.dim, 8)
    w = np.linalg.eigvalsh(symbol_stack(cell, pts, "skew", up=True))
    assert w.min() >= -1e-10
    s0 = np.linalg.eigvalsh(symbol(cell, np.zeros(cell.dim)).matrix.entries)
    assert abs(s0).min() < 1e-12


def test_symbol_at_zero_is_the_quotient():
    # theta = 0 gives the operator on the periodic quotient graph
    cell = catalog("square")
    assert np.allclose(symbol(cell, (0, 0), "sym").matrix.entries, [[4, 4], [4, 4]])


@pytest.mark.parametrize("name, flavor, up", [
    ("square", "skew", False), ("square", "sym", False), ("triangular", "skew", True),
    ("triangular", "sym", True), ("kagome", "skew", True), ("kagome", "sym", False),
])
def test_torus_consistency(name, flavor, up):
    cell = catalog(name)
    cx = torus_complex(cell, 4, n=2 if up else 1)
    a = np.sort(np.linalg.eigvalsh(normalized_block(cx, 1, flavor).toarray()))
    assert np.max(np.abs(a - torus_bloch_spectrum(cell, 4, flavor, up))) < 1e-9


def test_torus_too_small():
    with pytest.raises(ValueError):
        torus_graph(catalog("square"), 2)


def test_grid_floor():
    with pytest.raises(ValueError):
        bz_maximum(catalog("square"), grid=4)


def test_monotone_in_nested_grids():
    cell = catalog("cubic")
    lo = bz_maximum(cell, grid=16, flavor="skew").coarse
    hi = bz_maximum(cell, grid=32, flavor="skew").coarse
    assert hi >= lo - 1e-12


def test_refinement_reaches_off_grid_maximum():
    # the skew triangular maximum 9 sits at theta = (2pi/3, 4pi/3), off a 64-grid
    res = bz_maximum(catalog("triangular"), grid=64, flavor="skew")
    assert res.coarse < 9 - 1e-6
    assert res.value == pytest.approx(9, abs=1e-9)


def test_threads_do_not_change_the_result(monkeypatch):
    cell = catalog("fcc")
    pts = theta_grid(3, 12)
    monkeypatch.setenv("HODGE_THREADS", "1")
    one = top_eigenvalues(cell, pts)
    monkeypatch.setenv("HODGE_THREADS", "4")
    import hodgelap.bloch as bloch
    monkeypatch.setattr(bloch, "CHUNK", 100)
    four = top_eigenvalues(cell, pts)
    assert np.array_equal(one, four)


def test_compare_table_rows():
    rows = {r.lattice: r for r in compare_table(("square", "triangular", "kagome"))}
    assert (rows["square"].degree, rows["square"].universal) == (4, 12)
    assert rows["square"].bloch == pytest.approx(8, abs=1e-8)
    assert (rows["triangular"].degree, rows["triangular"].universal) == (6, 20)
    assert rows["triangular"].bloch == pytest.approx(12, abs=1e-8)
    assert rows["kagome"].universal == 12
    assert rows["kagome"].bloch <= 12


def test_variant_table_marks_matches():
    rows = variant_table(("triangular",), expected={"triangular": 12})
    assert rows[0][("skew", False)] == pytest.approx(9, abs=1e-8)
    assert rows[0][("sym", True)] == pytest.approx(18, abs=1e-8)
    assert rows[0]["matches"] == [("sym", False)]


def test_custom_cell():
    cell = cell_from_dict({"dim": 1, "vertices": ["A", "B"],
                           "edges": [{"u": "A", "v": "B", "shift": [0]},
                                     {"u": "B", "v": "A", "shift": [1], "m1": 2.0}]})
    assert cell.degree() == 2
    cx = torus_complex(cell, 6)
    for flavor in ("skew", "sym"):
        a = np.linalg.eigvalsh(normalized_block(cx, 1, flavor).toarray())
        assert np.allclose(np.sort(a), torus_bloch_spectrum(cell, 6, flavor), atol=1e-9)
        assert bz_maximum(cell, grid=16, flavor=flavor).value >= a.max() - 1e-9
