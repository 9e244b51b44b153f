import numpy as np
import pytest

from intree.data import Dataset, Metric, PairwiseDistances


@pytest.fixture
def two_blob():
    """The fully hand-traced 1-D pair of blobs with known truth labels."""
    pts = np.array([[0.0], [1.0], [2.0], [10.0], [11.0], [12.0]])
    return Dataset(pts, np.array([0, 0, 0, 1, 1, 1]))


@pytest.fixture
def two_blob_dist(two_blob):
    return PairwiseDistances(two_blob, Metric.EUCLIDEAN)


@pytest.fixture
def four_point():
    """1-D {0,1,3,7}; with k=2 its accumulated distance sums are {4,3,5,10}."""
    ds = Dataset(np.array([[0.0], [1.0], [3.0], [7.0]]))
    return PairwiseDistances(ds, Metric.EUCLIDEAN)


def random_dataset(rng, n=None, d=None, labels=False):
    n = n if n is not None else int(rng.integers(1, 60))
    d = d if d is not None else int(rng.integers(1, 6))
    pts = rng.uniform(-5, 5, (n, d))
    lab = rng.integers(0, 4, n) if labels else None
    return Dataset(pts, lab)
