"""Node potentials: layered accumulation and the exponential-kernel density.

Potentials follow the lower-is-denser sign convention; density is its
negation.  Downstream comparisons always use the (potential, id)
lexicographic order so exact ties cannot stall the descent.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .data import PairwiseDistances
from .neighbors import NeighborGraph


class PotentialMode(str, Enum):
    SUM_DISTANCE = "sumdist"
    EXP_KERNEL = "expkernel"


@dataclass(frozen=True)
class PotentialConfig:
    mode: PotentialMode = PotentialMode.EXP_KERNEL
    sigma: float | None = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", PotentialMode(self.mode))
        if self.mode is PotentialMode.EXP_KERNEL:
            if self.sigma is None or not self.sigma > 0:
                raise ValueError("sigma must be > 0 for the exponential kernel")


def accumulate_potential(
    prev: np.ndarray, graph: NeighborGraph, config: PotentialConfig
) -> np.ndarray:
    """One layer of potential accumulation over the graph's active nodes.

    Each active node adds the sum of its per-neighbor contributions, distance
    itself or -exp(-distance/sigma), on top of its carried-over potential.
    Inactive nodes are returned unchanged.
    """
    out = np.asarray(prev, dtype=np.float64).copy()
    if graph.k_eff == 0:
        return out
    if config.mode is PotentialMode.SUM_DISTANCE:
        inc = graph.distances.sum(axis=1)
    else:
        inc = -np.exp(-graph.distances / config.sigma).sum(axis=1)
    out[graph.active] += inc
    return out


def kernel_density(dist: PairwiseDistances, sigma: float) -> np.ndarray:
    """rho_i = sum over j != i of exp(-d_ij / sigma), for every node."""
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    n = dist.n
    rho = np.empty(n)
    if dist.matrix is not None:
        return _kernels.density_rows(dist.matrix, np.arange(n, dtype=np.int64), sigma)
    cols = np.arange(n, dtype=np.int64)
    step = max(1, 4_000_000 // n)
    for s in range(0, n, step):
        rows = np.arange(s, min(n, s + step), dtype=np.int64)
        rho[s : s + rows.size] = _kernels.density_rows(
            dist.block(rows, cols), rows, sigma
        )
    return rho
