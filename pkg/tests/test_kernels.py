"""Backend parity: the jitted and numpy kernel paths must agree.

Selection kernels are comparison-only, so given one shared distance matrix
their outputs must match exactly; the pairwise builders use different
summation orders, so their values are compared to tolerance and their
contracts (symmetry, zero diagonal) exactly.
"""
import numpy as np
import pytest

from intree import _kernels

pytestmark = pytest.mark.skipif(
    not _kernels.NUMBA_AVAILABLE, reason="numba not installed"
)


@pytest.fixture
def backends():
    saved = _kernels.active_backend()
    yield
    _kernels.set_backend(saved)


def _both(fn, *args, **kwargs):
    out = {}
    for backend in ("numba", "numpy"):
        _kernels.set_backend(backend)
        out[backend] = fn(*args, **kwargs)
    return out["numba"], out["numpy"]


def test_set_backend_validates(backends):
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")
    _kernels.set_backend("numpy")
    assert _kernels.active_backend() == "numpy"


@pytest.mark.parametrize("n,d", [(1, 1), (17, 3), (60, 8)])
def test_pairwise_euclidean_contracts_and_closeness(backends, n, d):
    X = np.random.default_rng(n * 31 + d).normal(size=(n, d))
    nb, npy = _both(_kernels.pairwise_euclidean, X)
    for D in (nb, npy):
        assert np.array_equal(D, D.T)
        assert (np.diag(D) == 0).all()
        assert (D >= 0).all()
    np.testing.assert_allclose(nb, npy, rtol=1e-9, atol=1e-9)


def test_pairwise_cosine_contracts_and_closeness(backends):
    rng = np.random.default_rng(5)
    X = rng.normal(size=(40, 6))
    X[7] = 0.0  # zero vector handled by contract
    U, zero = _kernels.unit_rows(X)
    nb, npy = _both(_kernels.pairwise_cosine, U, zero)
    for D in (nb, npy):
        assert np.array_equal(D, D.T)
        assert (np.diag(D) == 0).all()
        assert D[7, 0] == 1.0 and D[0, 7] == 1.0
        assert (D >= 0).all() and (D <= 2).all()
    np.testing.assert_allclose(nb, npy, rtol=1e-9, atol=1e-9)


def test_blocks_match_full_matrix(backends):
    rng = np.random.default_rng(6)
    X = rng.normal(size=(25, 4))
    rows = np.array([3, 11, 24], dtype=np.int64)
    cols = np.arange(25, dtype=np.int64)
    nb, npy = _both(_kernels.euclidean_block, X, rows, cols)
    np.testing.assert_allclose(nb, npy, rtol=1e-9, atol=1e-12)
    assert nb[0, 3] == 0.0 and npy[0, 3] == 0.0


def test_knn_select_identical_on_shared_matrix(backends):
    rng = np.random.default_rng(7)
    D = rng.uniform(0, 1, (30, 30))
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    D[2, 5] = D[5, 2] = D[2, 9] = D[9, 2] = 0.25  # forced tie
    self_col = np.arange(30, dtype=np.int64)
    for k in (1, 3, 29):
        (i_nb, d_nb), (i_np, d_np) = _both(_kernels.knn_select, D, self_col, k)
        np.testing.assert_array_equal(i_nb, i_np)
        np.testing.assert_array_equal(d_nb, d_np)


def test_descend_neighbors_identical_with_ties(backends):
    rng = np.random.default_rng(8)
    n, k = 40, 6
    nbr = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        others = np.delete(np.arange(n), i)
        nbr[i] = rng.choice(others, size=k, replace=False)
    ndist = rng.uniform(0, 1, (n, k))
    ndist[0, :3] = 0.5  # distance ties
    P = rng.integers(0, 4, n).astype(float)  # many potential ties
    row_ids = np.arange(n, dtype=np.int64)
    (p_nb, w_nb), (p_np, w_np) = _both(
        _kernels.descend_neighbors, nbr, ndist, P, row_ids
    )
    np.testing.assert_array_equal(p_nb, p_np)
    np.testing.assert_array_equal(w_nb, w_np)


def test_descend_rows_identical(backends):
    rng = np.random.default_rng(9)
    n = 35
    D = rng.uniform(0, 1, (n, n))
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    P = rng.integers(0, 3, n).astype(float)
    ids = np.arange(n, dtype=np.int64)
    (p_nb, w_nb), (p_np, w_np) = _both(_kernels.descend_rows, D, ids, ids, P)
    np.testing.assert_array_equal(p_nb, p_np)
    np.testing.assert_array_equal(w_nb, w_np)


def test_delta_rows_identical(backends):
    rng = np.random.default_rng(10)
    n = 30
    D = rng.uniform(0, 1, (n, n))
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    rho = rng.integers(0, 3, n).astype(float)
    ids = np.arange(n, dtype=np.int64)
    (mh_nb, ma_nb), (mh_np, ma_np) = _both(_kernels.delta_rows, D, ids, ids, rho)
    np.testing.assert_array_equal(mh_nb, mh_np)
    np.testing.assert_array_equal(ma_nb, ma_np)


def test_density_rows_close(backends):
    rng = np.random.default_rng(11)
    n = 30
    D = rng.uniform(0, 2, (n, n))
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    ids = np.arange(n, dtype=np.int64)
    nb, npy = _both(_kernels.density_rows, D, ids, 0.7)
    np.testing.assert_allclose(nb, npy, rtol=1e-12)


def test_env_flag_selects_default_backend():
    # the import-time default honors INTREE_NUMBA=0
    import os
    import subprocess
    import sys

    code = "from intree import _kernels; print(_kernels.active_backend())"
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True, text=True,
        env={**os.environ, "INTREE_NUMBA": "0"},
    )
    assert out.stdout.strip() == "numpy"
