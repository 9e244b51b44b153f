"""Time the jitted kernels against their pure-numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py [--n 4000] [--d 16] [--k 10] [--repeat 3]

Each kernel runs on identical inputs under both backends; the table reports
best-of-repeat wall times and the speedup.  The jitted path is compiled (and
cached) before timing.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from intree import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4000)
    ap.add_argument("--d", type=int, default=16)
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.n, args.d))
    U, zero = _kernels.unit_rows(X)
    ids = np.arange(args.n, dtype=np.int64)
    P = rng.normal(size=args.n)

    _kernels.set_backend("numba")
    D = _kernels.pairwise_euclidean(X)  # also the shared input for selections
    nbr, ndist = _kernels.knn_select(D, ids, args.k)

    cases = [
        ("pairwise_euclidean", lambda: _kernels.pairwise_euclidean(X)),
        ("pairwise_cosine", lambda: _kernels.pairwise_cosine(U, zero)),
        ("knn_select", lambda: _kernels.knn_select(D, ids, args.k)),
        ("descend_neighbors", lambda: _kernels.descend_neighbors(nbr, ndist, P, ids)),
        ("descend_rows", lambda: _kernels.descend_rows(D, ids, ids, P)),
        ("delta_rows", lambda: _kernels.delta_rows(D, ids, ids, P)),
        ("density_rows", lambda: _kernels.density_rows(D, ids, 1.0)),
    ]

    print(f"n={args.n} d={args.d} k={args.k} (best of {args.repeat})")
    print(f"{'kernel':<20} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for name, fn in cases:
        _kernels.set_backend("numba")
        fn()  # ensure compiled
        t_nb = best_of(fn, args.repeat)
        _kernels.set_backend("numpy")
        t_np = best_of(fn, args.repeat)
        print(f"{name:<20} {t_nb * 1e3:>8.2f}ms {t_np * 1e3:>8.2f}ms {t_np / t_nb:>7.1f}x")
    _kernels.set_backend("numba")


if __name__ == "__main__":
    main()
