"""Top-down stage: pick redundant edges, remove them, emit cluster labels.

Every non-root node identifies exactly one edge (the one it starts), so cut
specifications are sets of node ids.  Removing K edges always yields K+1
clusters; cluster ids count up in increasing root-id order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from .tree import InTree, resolve_roots

GAP_EPSILON = 1e-12
DEFAULT_GAP_WINDOW = 50


class InvalidCutError(ValueError):
    """Cut references the root, unknown ids, or an out-of-range K."""


@dataclass(frozen=True)
class TopK:
    k: int


@dataclass(frozen=True)
class AutoGap:
    window: int = DEFAULT_GAP_WINDOW


@dataclass(frozen=True)
class Box:
    min_edge_len: float
    max_potential: float


@dataclass(frozen=True)
class NodeSet:
    nodes: tuple[int, ...]

    def __init__(self, nodes):
        object.__setattr__(self, "nodes", tuple(int(v) for v in nodes))


CutSpec = Union[TopK, AutoGap, Box, NodeSet]


def e_cut_rank(tree: InTree) -> tuple[np.ndarray, np.ndarray]:
    """Edges by decreasing length, ties by smaller start id; root excluded.

    Returns (start_ids, lengths), both length N-1.
    """
    non_root = ~tree.root_mask
    ids = np.flatnonzero(non_root)
    lengths = tree.edge_weight[ids]
    order = np.lexsort((ids, -lengths))
    return ids[order], lengths[order]


def auto_gap_k(lengths: np.ndarray, window: int = DEFAULT_GAP_WINDOW) -> int:
    """Cut count at the largest consecutive length ratio in the ranked head.

    Scans positions 1..min(window, len)-1 of the descending sequence and
    returns the position whose ratio lengths[pos-1]/lengths[pos] is maximal
    (first position wins ties); zero-length tails are guarded by a small
    epsilon.  Fewer than two entries means nothing to cut.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    lengths = np.asarray(lengths, dtype=np.float64)
    m = min(window, lengths.size)
    if m < 2:
        return 0
    ratios = lengths[: m - 1] / np.maximum(lengths[1:m], GAP_EPSILON)
    return int(np.argmax(ratios)) + 1


def _removed_edges(tree: InTree, spec: CutSpec, potential) -> np.ndarray:
    n = tree.n
    if isinstance(spec, TopK):
        if not 0 <= spec.k <= n - 1:
            raise InvalidCutError(f"top-k cut needs 0 <= K <= {n - 1}, got {spec.k}")
        ids, _ = e_cut_rank(tree)
        return ids[: spec.k]
    if isinstance(spec, AutoGap):
        ids, lengths = e_cut_rank(tree)
        return ids[: auto_gap_k(lengths, spec.window)]
    if isinstance(spec, Box):
        if potential is None:
            raise InvalidCutError("box cut requires the potential vector")
        P = np.asarray(potential, dtype=np.float64)
        mask = (
            ~tree.root_mask
            & (tree.edge_weight >= spec.min_edge_len)
            & (P <= spec.max_potential)
        )
        return np.flatnonzero(mask)
    if isinstance(spec, NodeSet):
        ids = np.asarray(spec.nodes, dtype=np.int64)
        if ids.size and ((ids < 0).any() or (ids >= n).any()):
            raise InvalidCutError("cut references unknown node ids")
        if tree.root_mask[ids].any():
            raise InvalidCutError("cut references the root node")
        return np.unique(ids)
    raise InvalidCutError(f"unknown cut spec {spec!r}")


def apply_cut(tree: InTree, spec: CutSpec, potential=None) -> np.ndarray:
    """Labels after removing the selected edges: one cluster per root."""
    removed = _removed_edges(tree, spec, potential)
    roots = resolve_roots(tree, set(removed.tolist()))
    _, labels = np.unique(roots, return_inverse=True)
    return labels.astype(np.int64)


# ---------------------------------------------------------------------------
# decision-graph document (the UI and HTTP wire format)
# ---------------------------------------------------------------------------


def decision_graph_export(
    tree: InTree,
    potential: np.ndarray,
    points2d: np.ndarray | None = None,
    trace: list[int] | None = None,
) -> dict:
    """Document for the interactive cut: one candidate point per non-root node.

    Schema: {"n", "parent", "edge_len" (root -> null), "potential",
    "points2d" | null, "trace"}.
    """
    n = tree.n
    P = np.asarray(potential, dtype=np.float64)
    if P.shape != (n,):
        raise ValueError("potential must have one entry per node")
    root_mask = tree.root_mask
    edge_len = [
        None if root_mask[i] else float(tree.edge_weight[i]) for i in range(n)
    ]
    doc = {
        "n": n,
        "parent": tree.parent.tolist(),
        "edge_len": edge_len,
        "potential": P.tolist(),
        "points2d": None,
        "trace": list(trace) if trace is not None else [],
    }
    if points2d is not None:
        pts = np.asarray(points2d, dtype=np.float64)
        if pts.shape != (n, 2):
            raise ValueError("points2d must be N x 2")
        doc["points2d"] = pts.tolist()
    return doc


def document_to_json(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def document_from_json(text: str) -> dict:
    doc = json.loads(text)
    tree_from_document(doc)  # validates
    return doc


def tree_from_document(doc: dict) -> tuple[InTree, np.ndarray]:
    """Rebuild the tree and potential vector from an exported document."""
    try:
        n = int(doc["n"])
        parent = np.asarray(doc["parent"], dtype=np.int64)
        potential = np.asarray(doc["potential"], dtype=np.float64)
        edge_len = doc["edge_len"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed decision-graph document: {exc}") from exc
    if parent.shape != (n,) or potential.shape != (n,) or len(edge_len) != n:
        raise ValueError("decision-graph document arrays disagree on n")
    weight = np.array(
        [-np.inf if v is None else float(v) for v in edge_len], dtype=np.float64
    )
    tree = InTree(parent, weight, np.zeros(n, dtype=np.int64))
    return tree, potential
