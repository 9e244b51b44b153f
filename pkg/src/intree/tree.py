"""The in-tree structure: parent/weight arrays, validation, root resolution.

A root is encoded as its own parent and carries edge weight -inf; that
sentinel is excluded from every edge-length ranking downstream.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ROOT_WEIGHT = -np.inf


class StructureError(RuntimeError):
    """Raised when a parent chain hits a cycle."""


def _as_parent_array(parent) -> np.ndarray:
    arr = np.asarray(parent, dtype=np.int64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("parent must be a non-empty 1-D array")
    if (arr < 0).any() or (arr >= arr.size).any():
        raise ValueError("parent ids out of range")
    return arr


@dataclass(frozen=True)
class InTree:
    """Single-root directed tree: every non-root has exactly one outgoing edge."""

    parent: np.ndarray
    edge_weight: np.ndarray
    layer_built: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "parent", _as_parent_array(self.parent))
        object.__setattr__(
            self, "edge_weight", np.asarray(self.edge_weight, dtype=np.float64)
        )
        object.__setattr__(
            self, "layer_built", np.asarray(self.layer_built, dtype=np.int64)
        )

    @property
    def n(self) -> int:
        return self.parent.size

    @property
    def root_mask(self) -> np.ndarray:
        return self.parent == np.arange(self.n)

    @property
    def root(self) -> int:
        roots = np.flatnonzero(self.root_mask)
        if roots.size != 1:
            raise StructureError(f"expected one root, found {roots.size}")
        return int(roots[0])


@dataclass(frozen=True)
class Forest(InTree):
    """Same encoding, but any number of self-parented roots is legal."""

    @property
    def roots(self) -> np.ndarray:
        return np.flatnonzero(self.root_mask)


@dataclass(frozen=True)
class TreeReport:
    single_root: bool
    out_degree_one: bool
    acyclic: bool
    connected: bool

    @property
    def is_valid(self) -> bool:
        return self.single_root and self.out_degree_one and self.acyclic and self.connected


def _chain_states(parent: np.ndarray) -> np.ndarray:
    """2 = reaches a root, 3 = runs into a cycle, per node."""
    n = parent.size
    state = np.zeros(n, dtype=np.int8)  # 0 unseen, 1 on stack, 2 ok, 3 cyclic
    for start in range(n):
        if state[start]:
            continue
        path = []
        node = start
        while True:
            if state[node] == 0:
                state[node] = 1
                path.append(node)
                nxt = parent[node]
                if nxt == node:
                    verdict = 2
                    break
                node = nxt
            elif state[node] == 1:
                verdict = 3  # walked into our own path: cycle
                break
            else:
                verdict = state[node]
                break
        for v in path:
            state[v] = verdict
    return state


def validate_intree(tree) -> TreeReport:
    """Check the four structural properties; valid iff all hold."""
    parent = _as_parent_array(tree.parent if hasattr(tree, "parent") else tree)
    n = parent.size
    roots = np.flatnonzero(parent == np.arange(n))
    state = _chain_states(parent)
    acyclic = bool((state != 3).all())
    return TreeReport(
        single_root=roots.size == 1,
        out_degree_one=True,  # the parent array is total by construction
        acyclic=acyclic,
        connected=acyclic and roots.size == 1,
    )


def validate_forest(forest) -> TreeReport:
    """Forests only need acyclicity and every node reaching some root."""
    parent = _as_parent_array(forest.parent if hasattr(forest, "parent") else forest)
    roots = np.flatnonzero(parent == np.arange(parent.size))
    state = _chain_states(parent)
    acyclic = bool((state != 3).all())
    return TreeReport(
        single_root=roots.size == 1,
        out_degree_one=True,
        acyclic=acyclic,
        connected=acyclic and roots.size >= 1,
    )


def tree_to_json_dict(struct) -> dict:
    """JSON-safe arrays for the structure itself: parent, edge_weight (the
    root's -inf sentinel becomes null), layer_built.
    """
    root_mask = struct.parent == np.arange(struct.parent.size)
    return {
        "parent": struct.parent.tolist(),
        "edge_weight": [
            None if root_mask[i] else float(w)
            for i, w in enumerate(struct.edge_weight)
        ],
        "layer_built": struct.layer_built.tolist(),
    }


def root_of(struct, node: int, removed=frozenset(), memo: dict | None = None) -> int:
    """Terminal node of the parent chain from `node`.

    An edge in `removed` (given by its start node) stops the walk at that
    start node.  Pass a shared `memo` dict to make repeated queries O(N)
    total; entries are written once and never changed.
    """
    parent = struct.parent if hasattr(struct, "parent") else struct
    n = len(parent)
    if not 0 <= node < n:
        raise IndexError(f"node {node} out of range")
    if memo is None:
        memo = {}
    path = []
    at = node
    steps = 0
    while True:
        if at in memo:
            root = memo[at]
            break
        if parent[at] == at or at in removed:
            root = at
            break
        path.append(at)
        at = int(parent[at])
        steps += 1
        if steps > n:
            raise StructureError("cycle encountered while resolving root")
    for v in path:
        memo[v] = root
    memo[node] = root
    return root


def resolve_roots(struct, removed=frozenset()) -> np.ndarray:
    """Root of every node at once (iterative path compression, O(N) total)."""
    parent = struct.parent if hasattr(struct, "parent") else struct
    parent = np.asarray(parent, dtype=np.int64)
    n = parent.size
    out = np.full(n, -1, dtype=np.int64)
    removed = set(int(r) for r in removed)
    for start in range(n):
        if out[start] >= 0:
            continue
        path = []
        at = start
        while True:
            if out[at] >= 0:
                root = int(out[at])
                break
            if parent[at] == at or at in removed:
                root = at
                break
            path.append(at)
            at = int(parent[at])
            if len(path) > n:
                raise StructureError("cycle encountered while resolving roots")
        out[start] = root
        for v in path:
            out[v] = root
    return out
