"""The descent family: layered construction plus the single-pass baselines.

All variants share one primitive: a node's candidate parents are the nodes
strictly below it in the (potential, id) lexicographic order, and it links to
the closest candidate (distance ties to the smaller id).  The layered builder
re-runs that primitive on the shrinking root set while accumulating
potentials; the baselines apply it once against a fixed potential or density
vector.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .data import PairwiseDistances
from .neighbors import NeighborGraph, build_knn
from .potential import PotentialConfig, accumulate_potential
from .tree import ROOT_WEIGHT, Forest, InTree


@dataclass(frozen=True)
class LayerState:
    """Result of one descent pass over an active set.

    `parent` and `weight` align with `active`; roots carry parent -1 and a
    NaN weight.
    """

    active: np.ndarray
    parent: np.ndarray
    weight: np.ndarray

    @property
    def roots(self) -> np.ndarray:
        return self.active[self.parent < 0]

    @property
    def parent_map(self) -> dict[int, int]:
        non_root = self.parent >= 0
        return dict(
            zip(self.active[non_root].tolist(), self.parent[non_root].tolist())
        )


@dataclass(frozen=True)
class LayerRecord:
    layer: int
    n_active: int
    n_roots: int
    potential_digest: str


@dataclass(frozen=True)
class DescentTrace:
    layers: list[LayerRecord] = field(default_factory=list)

    @property
    def root_counts(self) -> list[int]:
        return [rec.n_roots for rec in self.layers]


def _digest(P: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(P).tobytes()).hexdigest()[:12]


def nnd_layer(potential: np.ndarray, graph: NeighborGraph) -> LayerState:
    """One descent pass restricted to each node's neighbor list.

    At least one root always remains (the active (potential, id) minimum),
    and whenever two or more nodes are active at least one node descends, so
    the layered loop cannot stall.
    """
    P = np.asarray(potential, dtype=np.float64)
    parent, weight = _kernels.descend_neighbors(
        graph.indices, graph.distances, P, graph.active
    )
    return LayerState(graph.active, parent, weight)


def dnnd(
    dist: PairwiseDistances, k: int, config: PotentialConfig
) -> tuple[InTree, np.ndarray, DescentTrace]:
    """Layered bottom-up construction of the full in-tree.

    Per layer: rebuild the kNN graph on the surviving roots, accumulate their
    potentials, run one descent pass.  The loop ends when a single root
    remains; it gets itself as parent and the -inf sentinel weight.
    """
    n = dist.n
    parent = np.full(n, -1, dtype=np.int64)
    weight = np.zeros(n)
    layer_built = np.zeros(n, dtype=np.int64)
    P = np.zeros(n)
    records = []
    active = np.arange(n, dtype=np.int64)
    layer = 1
    while True:
        graph = build_knn(active, dist, k)
        P = accumulate_potential(P, graph, config)
        state = nnd_layer(P, graph)
        linked = state.parent >= 0
        parent[state.active[linked]] = state.parent[linked]
        weight[state.active[linked]] = state.weight[linked]
        layer_built[state.active[linked]] = layer
        roots = state.roots
        records.append(LayerRecord(layer, active.size, roots.size, _digest(P)))
        if roots.size == 1:
            r = int(roots[0])
            parent[r] = r
            weight[r] = ROOT_WEIGHT
            layer_built[r] = layer
            break
        active = roots
        layer += 1
    return InTree(parent, weight, layer_built), P, DescentTrace(records)


def _descend_subset(
    dist: PairwiseDistances, ids: np.ndarray, P: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Unrestricted descent of `ids` against each other; row-blocked."""
    a = ids.size
    parent = np.empty(a, dtype=np.int64)
    weight = np.empty(a)
    step = max(1, 4_000_000 // max(1, a))
    for s in range(0, a, step):
        rows = ids[s : min(a, s + step)]
        D = dist.block(rows, ids)
        parent[s : s + rows.size], weight[s : s + rows.size] = _kernels.descend_rows(
            D, rows, ids, P
        )
    return parent, weight


def nd(dist: PairwiseDistances, potential: np.ndarray) -> InTree:
    """Single-pass descent with every node searching the whole dataset.

    Exactly one node, the global (potential, id) minimum, ends up as root, so
    the output is always a valid in-tree.
    """
    n = dist.n
    P = np.asarray(potential, dtype=np.float64)
    ids = np.arange(n, dtype=np.int64)
    parent, weight = _descend_subset(dist, ids, P)
    roots = parent < 0
    parent[roots] = ids[roots]
    weight[roots] = ROOT_WEIGHT
    return InTree(parent, weight, np.ones(n, dtype=np.int64))


def hnnd(dist: PairwiseDistances, k: int, potential: np.ndarray) -> InTree:
    """Two-stage construction under one fixed potential vector.

    Stage 1 runs the neighbor-restricted pass over all nodes; stage 2 links
    the surviving stage-1 roots by unrestricted descent among themselves,
    which leaves the single global minimum as root.
    """
    n = dist.n
    P = np.asarray(potential, dtype=np.float64)
    graph = build_knn(np.arange(n, dtype=np.int64), dist, k)
    state = nnd_layer(P, graph)
    parent = np.full(n, -1, dtype=np.int64)
    weight = np.zeros(n)
    layer_built = np.ones(n, dtype=np.int64)
    linked = state.parent >= 0
    parent[state.active[linked]] = state.parent[linked]
    weight[state.active[linked]] = state.weight[linked]
    roots = state.roots
    p2, w2 = _descend_subset(dist, roots, P)
    stage2 = p2 >= 0
    parent[roots[stage2]] = p2[stage2]
    weight[roots[stage2]] = w2[stage2]
    layer_built[roots] = 2
    final = roots[~stage2]
    parent[final] = final
    weight[final] = ROOT_WEIGHT
    return InTree(parent, weight, layer_built)


def graph_ga(graph: NeighborGraph, rho: np.ndarray) -> Forest:
    """Steepest-neighbor ascent on a density vector.

    Each node takes the neighbor maximizing (rho_j - rho_i) / d_ij; a node
    whose best value is not strictly positive stays a root, which both breaks
    would-be two-cycles between mutual neighbors and keeps density strictly
    increasing along every parent chain.  Coincident points (d_ij = 0) count
    as an infinite gradient when the neighbor is strictly denser.
    """
    rho = np.asarray(rho, dtype=np.float64)
    if not np.isfinite(rho).all():
        raise ValueError("density must be finite")
    ids = graph.active
    a = ids.size
    if a != rho.size or not np.array_equal(ids, np.arange(a)):
        raise ValueError("graph must cover all nodes for a full forest")
    parent = ids.copy()
    weight = np.full(a, ROOT_WEIGHT)
    if graph.k_eff > 0:
        num = rho[graph.indices] - rho[ids][:, None]
        dpos = graph.distances > 0.0
        grad = np.where(
            dpos,
            num / np.where(dpos, graph.distances, 1.0),
            np.where(num > 0.0, np.inf, -np.inf),
        )
        best = grad.max(axis=1)
        rising = best > 0.0
        tie = grad == best[:, None]
        pick = np.where(tie, graph.indices, np.iinfo(np.int64).max).min(axis=1)
        pdist = np.where(
            tie & (graph.indices == pick[:, None]), graph.distances, np.inf
        ).min(axis=1)
        parent[rising] = pick[rising]
        weight[rising] = pdist[rising]
    return Forest(parent, weight, np.ones(a, dtype=np.int64))


def rl_delta(rho: np.ndarray, dist: PairwiseDistances) -> np.ndarray:
    """Min distance to any strictly denser node; ties on density break by id.

    The single (rho, id) maximum has no denser node and gets its distance to
    the farthest node instead.
    """
    rho = np.asarray(rho, dtype=np.float64)
    n = dist.n
    if n < 2:
        raise ValueError("delta needs at least two points")
    if rho.shape != (n,):
        raise ValueError("density must have one entry per node")
    ids = np.arange(n, dtype=np.int64)
    delta = np.empty(n)
    step = max(1, 4_000_000 // n)
    for s in range(0, n, step):
        rows = ids[s : min(n, s + step)]
        D = dist.block(rows, ids)
        min_higher, max_all = _kernels.delta_rows(D, rows, ids, rho)
        delta[s : s + rows.size] = np.where(
            np.isfinite(min_higher), min_higher, max_all
        )
    return delta
