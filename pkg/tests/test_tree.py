import numpy as np
import pytest

from intree.tree import (
    Forest,
    InTree,
    StructureError,
    resolve_roots,
    root_of,
    validate_forest,
    validate_intree,
)

from ._oracles import oracle_roots


def _tree(parent, weights=None):
    parent = np.asarray(parent, dtype=np.int64)
    if weights is None:
        weights = np.where(parent == np.arange(parent.size), -np.inf, 1.0)
    return InTree(parent, weights, np.zeros(parent.size, dtype=np.int64))


class TestValidate:
    def test_single_node_valid(self):
        assert validate_intree(_tree([0])).is_valid

    def test_two_cycle_invalid(self):
        report = validate_intree(_tree([1, 0]))
        assert not report.single_root
        assert not report.acyclic
        assert not report.is_valid

    def test_two_roots_invalid_tree_valid_forest(self):
        parent = [0, 0, 2, 2]
        assert not validate_intree(_tree(parent)).is_valid
        forest = Forest(
            np.array(parent), np.array([-np.inf, 1.0, -np.inf, 1.0]), np.zeros(4, np.int64)
        )
        report = validate_forest(forest)
        assert report.acyclic and report.connected

    def test_longer_cycle_detected(self):
        assert not validate_intree(_tree([1, 2, 0, 0])).acyclic

    def test_out_of_range_parent_rejected(self):
        with pytest.raises(ValueError):
            validate_intree(np.array([5, 0]))


class TestRootOf:
    def test_chain(self):
        tree = _tree([1, 2, 2])
        assert root_of(tree, 0) == 2

    def test_chain_with_removed_edge(self):
        tree = _tree([1, 2, 2])
        assert root_of(tree, 0, removed={1}) == 1

    def test_removed_start_is_its_own_root(self):
        tree = _tree([1, 2, 2])
        assert root_of(tree, 1, removed={1}) == 1

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        parent = np.minimum(np.arange(20), rng.integers(0, 20, 20))
        parent[0] = 0  # each node points at a smaller id: valid tree
        tree = _tree(parent)
        for node in range(20):
            r = root_of(tree, node)
            assert root_of(tree, r) == r

    def test_matches_transitive_closure_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n = int(rng.integers(1, 80))
            # parent[i] < i gives an acyclic single-root structure rooted at 0
            parent = np.array(
                [0] + [int(rng.integers(0, i)) for i in range(1, n)], dtype=np.int64
            )
            removed = set(
                int(v) for v in rng.choice(n, size=min(n // 4, 5), replace=False)
            ) - {0}
            tree = _tree(parent)
            memo = {}
            got = [root_of(tree, i, removed=removed, memo=memo) for i in range(n)]
            expected = oracle_roots(parent, removed)
            np.testing.assert_array_equal(got, expected)
            np.testing.assert_array_equal(resolve_roots(tree, removed), expected)

    def test_cycle_raises_structure_error(self):
        bad = np.array([1, 0], dtype=np.int64)
        with pytest.raises(StructureError):
            root_of(bad, 0)
        with pytest.raises(StructureError):
            resolve_roots(bad)


def test_removing_k_edges_yields_k_plus_one_roots():
    rng = np.random.default_rng(23)
    for _ in range(25):
        n = int(rng.integers(2, 100))
        parent = np.array(
            [0] + [int(rng.integers(0, i)) for i in range(1, n)], dtype=np.int64
        )
        tree = _tree(parent)
        k = int(rng.integers(0, n))
        removed = set(
            int(v) for v in rng.choice(np.arange(1, n), size=min(k, n - 1), replace=False)
        )
        roots = resolve_roots(tree, removed)
        assert len(np.unique(roots)) == len(removed) + 1


def test_root_property():
    assert _tree([1, 1]).root == 1
    with pytest.raises(StructureError):
        _tree([0, 1]).root  # two roots


def test_json_export_arrays():
    import json

    from intree.tree import tree_to_json_dict

    tree = InTree(
        np.array([1, 1, 1]), np.array([2.5, -np.inf, 1.0]), np.array([1, 2, 1])
    )
    exported = json.loads(json.dumps(tree_to_json_dict(tree)))
    assert exported["parent"] == [1, 1, 1]
    assert exported["edge_weight"] == [2.5, None, 1.0]
    assert exported["layer_built"] == [1, 2, 1]
