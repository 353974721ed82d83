#!/usr/bin/env python3
"""Benchmark the jitted kernels against their pure-numpy fallbacks.

Runs every hot kernel on a representative workload in both lanes and
prints a timing table.  Usage:

    python benchmarks/bench_backends.py [--quick]
"""

import argparse
import time

import numpy as np

from l1cert import build_m_ell1, kuratowski_embed, rho_metric
from l1cert.backend import load_backend
from l1cert.extraction import _signed_compositions


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(quick):
    n_bfs = 9 if quick else 10
    n_sweep = 10 if quick else 12
    n_tri = 8 if quick else 9
    n_pairs = 7 if quick else 8
    mesh = 8 if quick else 12

    _, graph = build_m_ell1(n_bfs)
    indptr, indices = graph.csr()

    pm = kuratowski_embed(build_m_ell1(n_sweep)[0], "0")
    set_rows = np.ascontiguousarray(pm.image_num[1 + n_sweep:].astype(np.int64))

    tri = rho_metric("m-ell1", n_tri).num.astype(np.int64)

    small = kuratowski_embed(build_m_ell1(n_pairs)[0], "0")
    img = small.image_num.astype(np.int64)
    src = small.source.num.astype(np.int64)

    zs = np.array(list(_signed_compositions(mesh, 6)), dtype=np.int64)
    fam = img[1:7]

    return [
        (f"bfs_all_pairs (ground {n_bfs}, {indptr.size - 1} vertices)",
         lambda k: k.bfs_all_pairs(indptr, indices)),
        (f"partition_normings (2^{n_sweep} masks x {set_rows.shape[1]} coords)",
         lambda k: k.partition_normings(set_rows, n_sweep)),
        (f"first_triangle_violation ({tri.shape[0]} vertices)",
         lambda k: k.first_triangle_violation(tri)),
        (f"pairwise_sup ({img.shape[0]} x {img.shape[1]})",
         lambda k: k.pairwise_sup(img)),
        (f"ratio_extremes ({src.shape[0]} pairs matrix)",
         lambda k: k.ratio_extremes(src, k.pairwise_sup(img))),
        (f"grid_min_abs ({zs.shape[0]} grid points)",
         lambda k: k.grid_min_abs(zs, fam)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    numpy_lane = load_backend("numpy")
    try:
        numba_lane = load_backend("numba")
    except ImportError:
        numba_lane = None
        print("numba not importable; timing the numpy lane only")

    jobs = workloads(args.quick)

    if numba_lane is not None:
        for _, fn in jobs:
            fn(numba_lane)  # JIT warmup outside the timed region

    width = max(len(name) for name, _ in jobs)
    header = f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, fn in jobs:
        t_np = best_of(lambda: fn(numpy_lane), args.repeats)
        if numba_lane is None:
            print(f"{name:<{width}}  {t_np * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
            continue
        t_nb = best_of(lambda: fn(numba_lane), args.repeats)
        print(
            f"{name:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms  "
            f"{t_np / t_nb:>7.1f}x"
        )


if __name__ == "__main__":
    main()
