"""k-nearest-neighbor graphs over an arbitrary active subset of nodes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import PairwiseDistances

# Row-block budget for the selection pass, in matrix elements.
_BLOCK_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class NeighborGraph:
    """Per-node neighbor lists, each sorted ascending by (distance, id).

    `indices` holds original node ids, row r describing active[r].  Every row
    is exactly k_eff long; k_eff is k clamped to |active| - 1.
    """

    active: np.ndarray
    indices: np.ndarray
    distances: np.ndarray
    k_requested: int
    k_eff: int

    @property
    def n_active(self) -> int:
        return self.active.shape[0]

    def neighbors_of(self, node: int) -> list[tuple[int, float]]:
        r = int(np.searchsorted(self.active, node))
        if r >= self.n_active or self.active[r] != node:
            raise KeyError(f"node {node} is not in the active set")
        return list(zip(self.indices[r].tolist(), self.distances[r].tolist()))


def build_knn(active, dist: PairwiseDistances, k: int) -> NeighborGraph:
    """Exact brute-force kNN; distance ties break to the smaller id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ids = np.unique(np.asarray(list(active), dtype=np.int64))
    if ids.size < 1:
        raise ValueError("active set must not be empty")
    if ids.size and (ids[0] < 0 or ids[-1] >= dist.n):
        raise IndexError("active ids out of range")
    a = ids.size
    k_eff = min(k, a - 1)
    if k_eff == 0:
        return NeighborGraph(
            ids, np.empty((a, 0), np.int64), np.empty((a, 0)), k, 0
        )
    idx = np.empty((a, k_eff), np.int64)
    nd = np.empty((a, k_eff))
    step = max(1, _BLOCK_ELEMENTS // a)
    for s in range(0, a, step):
        e = min(a, s + step)
        D = dist.block(ids[s:e], ids)
        cols, dv = _kernels.knn_select(D, np.arange(s, e, dtype=np.int64), k_eff)
        idx[s:e] = ids[cols]
        nd[s:e] = dv
    return NeighborGraph(ids, idx, nd, k, k_eff)
