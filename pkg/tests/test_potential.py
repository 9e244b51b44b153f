import numpy as np
import pytest

from intree.data import Dataset, PairwiseDistances
from intree.neighbors import build_knn
from intree.potential import (
    PotentialConfig,
    PotentialMode,
    accumulate_potential,
    kernel_density,
)

from ._oracles import oracle_density

SUM = PotentialConfig(PotentialMode.SUM_DISTANCE, None)


def test_sum_distance_first_layer():
    dist = PairwiseDistances(Dataset(np.array([[0.0], [1.0], [3.0]])))
    graph = build_knn(range(3), dist, 2)
    P = accumulate_potential(np.zeros(3), graph, SUM)
    np.testing.assert_array_equal(P, [4.0, 3.0, 5.0])


def test_exp_kernel_sigma_to_infinity_approaches_minus_k():
    rng = np.random.default_rng(0)
    dist = PairwiseDistances(Dataset(rng.normal(size=(20, 2))))
    graph = build_knn(range(20), dist, 4)
    P = accumulate_potential(np.zeros(20), graph, PotentialConfig("expkernel", 1e18))
    np.testing.assert_allclose(P, -4.0, rtol=0, atol=1e-12)


def test_second_layer_two_blob(two_blob_dist):
    # carried-over potentials {1: 2, 11: 2}, the two roots 10 apart
    prev = np.zeros(6)
    prev[1] = prev[4] = 2.0
    graph = build_knn([1, 4], two_blob_dist, 2)
    assert graph.k_eff == 1
    P = accumulate_potential(prev, graph, SUM)
    assert P[1] == 12.0 and P[4] == 12.0


def test_inactive_nodes_untouched():
    dist = PairwiseDistances(Dataset(np.array([[0.0], [1.0], [50.0], [51.0]])))
    prev = np.array([1.0, 2.0, 3.0, 4.0])
    graph = build_knn([0, 1], dist, 1)
    P = accumulate_potential(prev, graph, SUM)
    np.testing.assert_array_equal(P[2:], prev[2:])
    assert P[0] == 2.0 and P[1] == 3.0


@pytest.mark.parametrize("mode,sigma", [("sumdist", None), ("expkernel", 0.7)])
def test_increment_ranges(mode, sigma):
    rng = np.random.default_rng(5)
    dist = PairwiseDistances(Dataset(rng.normal(size=(30, 2))))
    graph = build_knn(range(30), dist, 6)
    cfg = PotentialConfig(mode, sigma)
    P0 = rng.normal(size=30)
    P1 = accumulate_potential(P0, graph, cfg)
    inc = P1 - P0
    if cfg.mode is PotentialMode.SUM_DISTANCE:
        assert (inc > 0).all()  # k_eff >= 1 on distinct points
    else:
        assert (inc >= -graph.k_eff).all() and (inc < 0).all()


def test_sum_mode_strictly_increases_across_layers():
    rng = np.random.default_rng(9)
    dist = PairwiseDistances(Dataset(rng.normal(size=(25, 2))))
    P = np.zeros(25)
    active = np.arange(25)
    for _ in range(3):
        graph = build_knn(active, dist, 3)
        nxt = accumulate_potential(P, graph, SUM)
        assert (nxt[active] > P[active]).all()
        P = nxt
        active = active[: max(2, active.size // 2)]


class TestKernelDensity:
    def test_single_point_zero(self):
        dist = PairwiseDistances(Dataset(np.array([[3.0]])))
        np.testing.assert_array_equal(kernel_density(dist, 1.0), [0.0])

    def test_two_points_at_sigma(self):
        dist = PairwiseDistances(Dataset(np.array([[0.0], [2.0]])))
        np.testing.assert_allclose(kernel_density(dist, 2.0), np.exp(-1.0))

    def test_matches_double_loop_oracle(self):
        rng = np.random.default_rng(13)
        ds = Dataset(rng.uniform(-1, 1, (50, 3)))
        dist = PairwiseDistances(ds)
        for sigma in (0.05, 1.0, 30.0):
            rho = kernel_density(dist, sigma)
            np.testing.assert_allclose(
                rho, oracle_density(dist.matrix, sigma), rtol=1e-12
            )

    def test_permutation_equivariant(self):
        rng = np.random.default_rng(21)
        pts = rng.normal(size=(40, 2))
        perm = rng.permutation(40)
        rho = kernel_density(PairwiseDistances(Dataset(pts)), 0.5)
        rho_p = kernel_density(PairwiseDistances(Dataset(pts[perm])), 0.5)
        np.testing.assert_allclose(rho_p, rho[perm], rtol=1e-12)

    def test_blocked_path_matches_matrix_path(self):
        rng = np.random.default_rng(2)
        ds = Dataset(rng.normal(size=(40, 2)))
        full = kernel_density(PairwiseDistances(ds), 1.3)
        lazy = kernel_density(PairwiseDistances(ds, matrix_max_points=10), 1.3)
        np.testing.assert_allclose(lazy, full, rtol=1e-12)

    def test_sigma_validated(self):
        dist = PairwiseDistances(Dataset(np.array([[0.0]])))
        with pytest.raises(ValueError):
            kernel_density(dist, 0.0)


def test_config_requires_sigma_for_kernel():
    with pytest.raises(ValueError):
        PotentialConfig("expkernel", None)
    with pytest.raises(ValueError):
        PotentialConfig("expkernel", -1.0)
    PotentialConfig("sumdist", None)  # fine
