"""Numeric kernels, each with a numba-jitted and a pure-numpy implementation.

The jitted path is the default when numba imports; set INTREE_NUMBA=0 in the
environment (or call set_backend("numpy")) to force the numpy path.  Both
implementations of a kernel are total functions of their arguments and obey
the same tie rules, so selection results are identical given identical
distance values.  benchmarks/bench_kernels.py times the two paths against
each other.
"""
from __future__ import annotations

import os

import numpy as np

# The TBB probe warns on older system TBBs; workqueue is always available.
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

try:
    from numba import njit, prange

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        return wrap

    prange = range  # type: ignore[assignment]


_INT_MAX = np.iinfo(np.int64).max


def _default_backend() -> str:
    if NUMBA_AVAILABLE and os.environ.get("INTREE_NUMBA", "1") != "0":
        return "numba"
    return "numpy"


_backend = _default_backend()


def active_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    """Select 'numba' or 'numpy' for all kernels in this process."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is not importable")
    _backend = name


def unit_rows(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rows scaled to unit norm, plus the mask of all-zero rows."""
    norms = np.sqrt(np.einsum("ij,ij->i", X, X))
    zero = norms == 0.0
    return X / np.where(zero, 1.0, norms)[:, None], zero


# ---------------------------------------------------------------------------
# full pairwise matrices
# ---------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _pairwise_euclidean_nb(X):
    n, d = X.shape
    out = np.zeros((n, n))
    for i in prange(n):
        for j in range(i + 1, n):
            s = 0.0
            for t in range(d):
                diff = X[i, t] - X[j, t]
                s += diff * diff
            r = np.sqrt(s)
            out[i, j] = r
            out[j, i] = r
    return out


def _pairwise_euclidean_np(X):
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    D = np.sqrt(d2, out=d2)
    # BLAS blocking is not bitwise symmetric; the distance contract is.
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    return D


@njit(cache=True, parallel=True)
def _pairwise_cosine_nb(U, zero):
    n, d = U.shape
    out = np.zeros((n, n))
    for i in prange(n):
        for j in range(i + 1, n):
            if zero[i] or zero[j]:
                v = 1.0
            else:
                s = 0.0
                for t in range(d):
                    s += U[i, t] * U[j, t]
                v = 1.0 - s
                if v < 0.0:
                    v = 0.0
                elif v > 2.0:
                    v = 2.0
            out[i, j] = v
            out[j, i] = v
    return out


def _pairwise_cosine_np(U, zero):
    D = 1.0 - U @ U.T
    np.clip(D, 0.0, 2.0, out=D)
    D[zero, :] = 1.0
    D[:, zero] = 1.0
    D = np.minimum(D, D.T)
    np.fill_diagonal(D, 0.0)
    return D


def pairwise_euclidean(X: np.ndarray) -> np.ndarray:
    if _backend == "numba":
        return _pairwise_euclidean_nb(X)
    return _pairwise_euclidean_np(X)


def pairwise_cosine(U: np.ndarray, zero: np.ndarray) -> np.ndarray:
    if _backend == "numba":
        return _pairwise_cosine_nb(U, zero)
    return _pairwise_cosine_np(U, zero)


# ---------------------------------------------------------------------------
# on-demand distance blocks (datasets too large for a full matrix)
# ---------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _euclidean_block_nb(X, rows, cols):
    b, a = rows.shape[0], cols.shape[0]
    d = X.shape[1]
    out = np.empty((b, a))
    for r in prange(b):
        i = rows[r]
        for c in range(a):
            j = cols[c]
            s = 0.0
            for t in range(d):
                diff = X[i, t] - X[j, t]
                s += diff * diff
            out[r, c] = np.sqrt(s)
    return out


def _euclidean_block_np(X, rows, cols):
    diff = X[rows][:, None, :] - X[cols][None, :, :]
    return np.sqrt(np.einsum("rcd,rcd->rc", diff, diff))


@njit(cache=True, parallel=True)
def _cosine_block_nb(U, zero, rows, cols):
    b, a = rows.shape[0], cols.shape[0]
    d = U.shape[1]
    out = np.empty((b, a))
    for r in prange(b):
        i = rows[r]
        for c in range(a):
            j = cols[c]
            if i == j:
                out[r, c] = 0.0
            elif zero[i] or zero[j]:
                out[r, c] = 1.0
            else:
                s = 0.0
                for t in range(d):
                    s += U[i, t] * U[j, t]
                v = 1.0 - s
                if v < 0.0:
                    v = 0.0
                elif v > 2.0:
                    v = 2.0
                out[r, c] = v
    return out


def _cosine_block_np(U, zero, rows, cols):
    out = 1.0 - U[rows] @ U[cols].T
    np.clip(out, 0.0, 2.0, out=out)
    out[zero[rows], :] = 1.0
    out[:, zero[cols]] = 1.0
    out[rows[:, None] == cols[None, :]] = 0.0
    return out


def euclidean_block(X: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    if _backend == "numba":
        return _euclidean_block_nb(X, rows, cols)
    return _euclidean_block_np(X, rows, cols)


def cosine_block(U: np.ndarray, zero: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    if _backend == "numba":
        return _cosine_block_nb(U, zero, rows, cols)
    return _cosine_block_np(U, zero, rows, cols)


# ---------------------------------------------------------------------------
# k-nearest selection over a distance block
# ---------------------------------------------------------------------------
#
# Order is lexicographic (distance, column) ascending; the column axis must be
# sorted by node id so that column order == id order.


@njit(cache=True, parallel=True)
def _knn_select_nb(D, self_col, k):
    b, a = D.shape
    idx = np.empty((b, k), np.int64)
    dist = np.empty((b, k))
    for r in prange(b):
        sp = self_col[r]
        cd = np.empty(k)
        ci = np.empty(k, np.int64)
        m = 0
        for c in range(a):
            if c == sp:
                continue
            dv = D[r, c]
            if m < k:
                p = m
                while p > 0 and cd[p - 1] > dv:
                    cd[p] = cd[p - 1]
                    ci[p] = ci[p - 1]
                    p -= 1
                cd[p] = dv
                ci[p] = c
                m += 1
            elif dv < cd[k - 1]:
                p = k - 1
                while p > 0 and cd[p - 1] > dv:
                    cd[p] = cd[p - 1]
                    ci[p] = ci[p - 1]
                    p -= 1
                cd[p] = dv
                ci[p] = c
        for t in range(k):
            idx[r, t] = ci[t]
            dist[r, t] = cd[t]
    return idx, dist


def _knn_select_np(D, self_col, k):
    work = D.copy()
    work[np.arange(work.shape[0]), self_col] = np.inf
    # stable sort keeps equal distances in column order, i.e. smaller id first
    order = np.argsort(work, axis=1, kind="stable")[:, :k]
    return order, np.take_along_axis(work, order, axis=1)


def knn_select(D: np.ndarray, self_col: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    if k <= 0:
        b = D.shape[0]
        return np.empty((b, 0), np.int64), np.empty((b, 0))
    if _backend == "numba":
        return _knn_select_nb(D, self_col, np.int64(k))
    return _knn_select_np(D, self_col, k)


# ---------------------------------------------------------------------------
# descent selections
# ---------------------------------------------------------------------------
#
# A node descends to the closest of its candidates; candidates are the nodes
# strictly below it in the (potential, id) lexicographic order.  Distance ties
# resolve to the smaller id.  Nodes without candidates come back as parent -1.


@njit(cache=True, parallel=True)
def _descend_neighbors_nb(nbr, ndist, P, row_ids):
    n, k = nbr.shape
    parent = np.full(n, -1, np.int64)
    weight = np.full(n, np.nan)
    for r in prange(n):
        i = row_ids[r]
        pi = P[i]
        bd = np.inf
        bj = _INT_MAX
        for t in range(k):
            j = nbr[r, t]
            pj = P[j]
            if pj < pi or (pj == pi and j < i):
                dv = ndist[r, t]
                if dv < bd or (dv == bd and j < bj):
                    bd = dv
                    bj = j
        if bj != _INT_MAX:
            parent[r] = bj
            weight[r] = bd
    return parent, weight


def _descend_neighbors_np(nbr, ndist, P, row_ids):
    n, k = nbr.shape
    parent = np.full(n, -1, np.int64)
    weight = np.full(n, np.nan)
    if n == 0 or k == 0:
        return parent, weight
    pn = P[nbr]
    pr = P[row_ids][:, None]
    cand = (pn < pr) | ((pn == pr) & (nbr < row_ids[:, None]))
    dv = np.where(cand, ndist, np.inf)
    best = dv.min(axis=1)
    has = cand.any(axis=1)
    pick = np.where(cand & (ndist == best[:, None]), nbr, _INT_MAX).min(axis=1)
    parent[has] = pick[has]
    weight[has] = best[has]
    return parent, weight


def descend_neighbors(
    nbr: np.ndarray, ndist: np.ndarray, P: np.ndarray, row_ids: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    if _backend == "numba" and nbr.shape[1] > 0:
        return _descend_neighbors_nb(nbr, ndist, P, row_ids)
    return _descend_neighbors_np(nbr, ndist, P, row_ids)


@njit(cache=True, parallel=True)
def _descend_rows_nb(D, row_ids, col_ids, P):
    b = row_ids.shape[0]
    a = col_ids.shape[0]
    parent = np.full(b, -1, np.int64)
    weight = np.full(b, np.nan)
    for r in prange(b):
        i = row_ids[r]
        pi = P[i]
        bd = np.inf
        bj = _INT_MAX
        for c in range(a):
            j = col_ids[c]
            if j == i:
                continue
            pj = P[j]
            if pj < pi or (pj == pi and j < i):
                dv = D[r, c]
                if dv < bd or (dv == bd and j < bj):
                    bd = dv
                    bj = j
        if bj != _INT_MAX:
            parent[r] = bj
            weight[r] = bd
    return parent, weight


def _descend_rows_np(D, row_ids, col_ids, P):
    b = row_ids.shape[0]
    parent = np.full(b, -1, np.int64)
    weight = np.full(b, np.nan)
    if b == 0 or col_ids.shape[0] == 0:
        return parent, weight
    pc = P[col_ids][None, :]
    pr = P[row_ids][:, None]
    cand = (pc < pr) | ((pc == pr) & (col_ids[None, :] < row_ids[:, None]))
    dv = np.where(cand, D, np.inf)
    best = dv.min(axis=1)
    has = cand.any(axis=1)
    pick = np.where(cand & (D == best[:, None]), col_ids[None, :], _INT_MAX).min(axis=1)
    parent[has] = pick[has]
    weight[has] = best[has]
    return parent, weight


def descend_rows(
    D: np.ndarray, row_ids: np.ndarray, col_ids: np.ndarray, P: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    if _backend == "numba":
        return _descend_rows_nb(D, row_ids, col_ids, P)
    return _descend_rows_np(D, row_ids, col_ids, P)


# ---------------------------------------------------------------------------
# minimum distance to a higher-density node (plus the row maximum, which the
# caller substitutes for the single node that has no higher-density node)
# ---------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _delta_rows_nb(D, row_ids, col_ids, rho):
    b = row_ids.shape[0]
    a = col_ids.shape[0]
    min_higher = np.full(b, np.inf)
    max_all = np.zeros(b)
    for r in prange(b):
        i = row_ids[r]
        ri = rho[i]
        mh = np.inf
        ma = 0.0
        for c in range(a):
            j = col_ids[c]
            if j == i:
                continue
            dv = D[r, c]
            if dv > ma:
                ma = dv
            rj = rho[j]
            if (rj > ri or (rj == ri and j > i)) and dv < mh:
                mh = dv
        min_higher[r] = mh
        max_all[r] = ma
    return min_higher, max_all


def _delta_rows_np(D, row_ids, col_ids, rho):
    rc = rho[col_ids][None, :]
    rr = rho[row_ids][:, None]
    higher = (rc > rr) | ((rc == rr) & (col_ids[None, :] > row_ids[:, None]))
    min_higher = np.where(higher, D, np.inf).min(axis=1)
    others = col_ids[None, :] != row_ids[:, None]
    max_all = np.where(others, D, 0.0).max(axis=1)
    return min_higher, max_all


def delta_rows(
    D: np.ndarray, row_ids: np.ndarray, col_ids: np.ndarray, rho: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    if _backend == "numba":
        return _delta_rows_nb(D, row_ids, col_ids, rho)
    return _delta_rows_np(D, row_ids, col_ids, rho)


# ---------------------------------------------------------------------------
# exponential-kernel density row sums
# ---------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _density_rows_nb(D, row_ids, sigma):
    b, n = D.shape
    out = np.empty(b)
    for r in prange(b):
        i = row_ids[r]
        s = 0.0
        for j in range(n):
            if j != i:
                s += np.exp(-D[r, j] / sigma)
        out[r] = s
    return out


def _density_rows_np(D, row_ids, sigma):
    E = np.exp(-D / sigma)
    E[np.arange(D.shape[0]), row_ids] = 0.0
    return E.sum(axis=1)


def density_rows(D: np.ndarray, row_ids: np.ndarray, sigma: float) -> np.ndarray:
    if _backend == "numba":
        return _density_rows_nb(D, row_ids, sigma)
    return _density_rows_np(D, row_ids, sigma)
