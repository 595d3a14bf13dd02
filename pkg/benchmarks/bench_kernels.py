#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python reference.

Times the two hot loops of the analysis pipeline on realistic sizes:
DTW between 500-step resampled trajectories, and the batched PERMANOVA
within-group statistic over 999 label permutations.

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from chartcontext.kernels import _reference

try:
    from chartcontext.kernels import _core
except ImportError:
    _core = None


def time_fn(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_dtw(steps, n_pairs, repeats):
    rng = np.random.default_rng(0)
    paths = rng.uniform(0, 1, size=(n_pairs * 2, steps, 2))
    pairs = [(paths[2 * i], paths[2 * i + 1]) for i in range(n_pairs)]

    rows = []
    ref = time_fn(lambda: [_reference.dtw_cost(a, b) for a, b in pairs], repeats)
    rows.append(("reference", ref))
    if _core is not None:
        nat = time_fn(lambda: [_core.dtw_cost(a, b) for a, b in pairs], repeats)
        rows.append(("native", nat))
    return rows


def bench_ss_within(n, n_perm, repeats):
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = (diff**2).sum(axis=2)
    labels = np.argsort(rng.random((n_perm, n)), axis=1) % 3
    labels = np.ascontiguousarray(labels, dtype=np.int64)

    rows = [("reference", time_fn(lambda: _reference.ss_within_batch(d2, labels, 3), repeats))]
    if _core is not None:
        rows.append(("native", time_fn(lambda: _core.ss_within_batch(d2, labels, 3), repeats)))
    return rows


def print_table(title, rows, unit_note):
    print(f"\n{title}  [{unit_note}]")
    base = dict(rows).get("reference")
    for name, seconds in rows:
        speedup = f"  ({base / seconds:5.1f}x vs reference)" if name == "native" else ""
        print(f"  {name:>10}: {seconds * 1000:9.2f} ms{speedup}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller sizes, fewer repeats")
    args = parser.parse_args()

    steps = 200 if args.quick else 500
    n_pairs = 3 if args.quick else 10
    repeats = 2 if args.quick else 3

    if _core is None:
        print("note: compiled kernels not available; timing the reference only")

    rows = bench_dtw(steps, n_pairs, repeats)
    print_table(f"dtw_cost: {n_pairs} pairs of {steps}-step paths", rows, "best of runs")

    n = 22 if args.quick else 66
    n_perm = 999
    rows = bench_ss_within(n, n_perm, repeats)
    print_table(f"ss_within_batch: n={n}, {n_perm} permutations, 3 groups", rows, "best of runs")


if __name__ == "__main__":
    main()
