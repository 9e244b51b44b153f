"""Datasets: CSV ingestion, synthetic Gaussian mixtures, metrics, distances."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import _kernels

# Above this size the full pairwise matrix is not materialized and distance
# blocks are computed from the points on demand.
MATRIX_MAX_POINTS = 20000


class Metric(str, Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"


class CsvFormatError(ValueError):
    """Raised for ragged rows or cells that do not parse as finite numbers."""


class GenerationError(RuntimeError):
    """Raised when mixture means cannot be placed at the requested separation."""


@dataclass(frozen=True)
class Dataset:
    """N points with optional ground-truth labels; ids are row indices 0..N-1."""

    points: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2:
            raise ValueError("points must be a 2-D array")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("need at least one point and one dimension")
        if not np.isfinite(pts).all():
            raise ValueError("points must be finite")
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels)
            if lab.shape != (pts.shape[0],):
                raise ValueError(
                    f"expected {pts.shape[0]} labels, got {lab.shape}"
                )
            object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def load_csv(
    path: str | Path,
    has_label_column: bool = False,
    delimiter: str | None = None,
    skip_header: bool = False,
) -> Dataset:
    """Parse a one-point-per-row CSV; the label column, if any, is the last.

    delimiter=None autodetects: comma if the first data line contains one,
    otherwise any whitespace.  Blank lines are ignored.  Rows are 1-based in
    error messages, counted after the skipped header.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if skip_header and lines:
        lines = lines[1:]
    if not lines:
        raise CsvFormatError(f"{path}: no data rows")
    if delimiter is None:
        delimiter = "," if "," in lines[0] else None  # None -> whitespace split
    rows: list[list[str]] = []
    for ln in lines:
        cells = [c.strip() for c in ln.split(delimiter)]
        rows.append(cells)
    width = len(rows[0])
    for rix, cells in enumerate(rows, start=1):
        if len(cells) != width:
            raise CsvFormatError(
                f"row {rix}: has {len(cells)} columns, expected {width}"
            )
    n_features = width - 1 if has_label_column else width
    if n_features < 1:
        raise CsvFormatError("no feature columns")
    points = np.empty((len(rows), n_features))
    for rix, cells in enumerate(rows):
        for cix in range(n_features):
            try:
                v = float(cells[cix])
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                raise CsvFormatError(
                    f"row {rix + 1}, column {cix + 1}: {cells[cix]!r} is not a finite number"
                )
            points[rix, cix] = v
    labels = None
    if has_label_column:
        raw = [cells[-1] for cells in rows]
        try:
            labels = np.array([int(c) for c in raw], dtype=np.int64)
        except ValueError:
            labels = np.array(raw)
    return Dataset(points, labels)


def normalize_minmax(dataset: Dataset) -> Dataset:
    """Map each dimension affinely onto [0, 1]; constant dimensions map to 0."""
    pts = dataset.points
    lo = pts.min(axis=0)
    span = pts.max(axis=0) - lo
    scale = np.where(span > 0.0, span, 1.0)
    return Dataset((pts - lo) / scale, dataset.labels)


def distance(dataset: Dataset, metric: Metric, i: int, j: int) -> float:
    """Single-pair distance under the metric contract."""
    n = dataset.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"point id out of range: ({i}, {j})")
    if i == j:
        return 0.0
    a = dataset.points[i]
    b = dataset.points[j]
    if Metric(metric) is Metric.EUCLIDEAN:
        diff = a - b
        return float(np.sqrt(diff @ diff))
    na = float(np.sqrt(a @ a))
    nb = float(np.sqrt(b @ b))
    if na == 0.0 or nb == 0.0:
        return 1.0
    return float(min(max(1.0 - (a @ b) / (na * nb), 0.0), 2.0))


@dataclass(frozen=True)
class GaussianMixtureConfig:
    """Spherical unit-variance components with rejection-sampled means."""

    M: int
    N: int
    d: int
    separation: float = 10.0
    seed: int = 0
    mean_box_side: float | None = None

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.N < self.M:
            raise ValueError("N must be >= M")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if not self.separation > 0:
            raise ValueError("separation must be > 0")


def generate_gaussian_mixture(config: GaussianMixtureConfig) -> Dataset:
    """Deterministic mixture sample; labels record the component of origin.

    Component means are proposed uniformly in a hypercube and re-proposed
    until all pairs sit at least `separation` component standard deviations
    apart; the proposal budget is bounded, so an impossible request fails
    instead of spinning.
    """
    cfg = config
    rng = np.random.default_rng(cfg.seed)
    side = cfg.mean_box_side
    if side is None:
        side = cfg.separation * max(2.0, 3.0 * cfg.M ** (1.0 / cfg.d))
    means = np.empty((cfg.M, cfg.d))
    placed = 0
    budget = 1000 * cfg.M
    while placed < cfg.M:
        if budget == 0:
            raise GenerationError(
                f"could not place {cfg.M} means at separation {cfg.separation}"
            )
        budget -= 1
        cand = rng.uniform(0.0, side, cfg.d)
        if placed:
            gaps = np.sqrt(((means[:placed] - cand) ** 2).sum(axis=1))
            if gaps.min() < cfg.separation:
                continue
        means[placed] = cand
        placed += 1
    base, extra = divmod(cfg.N, cfg.M)
    counts = [base + (1 if c < extra else 0) for c in range(cfg.M)]
    chunks = []
    labels = np.empty(cfg.N, dtype=np.int64)
    at = 0
    for c, cnt in enumerate(counts):
        chunks.append(means[c] + rng.standard_normal((cnt, cfg.d)))
        labels[at : at + cnt] = c
        at += cnt
    return Dataset(np.vstack(chunks), labels)


class PairwiseDistances:
    """Distance access for one dataset under one metric.

    Holds the full N x N matrix when the dataset is small enough, otherwise
    computes row blocks from the points on demand.  All clustering code reads
    distances through this class only.
    """

    def __init__(
        self,
        dataset: Dataset,
        metric: Metric = Metric.EUCLIDEAN,
        matrix_max_points: int = MATRIX_MAX_POINTS,
    ):
        self.dataset = dataset
        self.metric = Metric(metric)
        self.n = dataset.n
        self._unit: np.ndarray | None = None
        self._zero: np.ndarray | None = None
        if self.metric is Metric.COSINE:
            self._unit, self._zero = _kernels.unit_rows(dataset.points)
        if self.n <= matrix_max_points:
            if self.metric is Metric.EUCLIDEAN:
                self.matrix: np.ndarray | None = _kernels.pairwise_euclidean(
                    dataset.points
                )
            else:
                self.matrix = _kernels.pairwise_cosine(self._unit, self._zero)
        else:
            self.matrix = None

    def block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """len(rows) x len(cols) distance block (a fresh array)."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if self.matrix is not None:
            return self.matrix[np.ix_(rows, cols)]
        if self.metric is Metric.EUCLIDEAN:
            return _kernels.euclidean_block(self.dataset.points, rows, cols)
        return _kernels.cosine_block(self._unit, self._zero, rows, cols)

    def row(self, i: int) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix[i]
        return self.block(np.array([i]), np.arange(self.n))[0]

    def pair(self, i: int, j: int) -> float:
        if self.matrix is not None:
            return float(self.matrix[i, j])
        return float(self.block(np.array([i]), np.array([j]))[0, 0])
