#!/usr/bin/env python3
"""Benchmark the numba-jitted kernels against the pure-Python fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--repeats N]

The library itself selects the path via FAIRHIDE_NUMBA (0 disables the jit);
this script imports both module instances directly and times the same inputs
on each, so one run covers both paths.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from fairhide import kernels
from fairhide.experiments import cell_seed, generate_bernoulli


def timed(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if kernels.jit_impl is None:
        raise SystemExit("numba disabled (FAIRHIDE_NUMBA=0); nothing to compare against")

    cases = {
        "hefk_exists(n=5,m=9,k=1)": lambda impl: kernels.hefk_exists(
            generate_bernoulli(5, 9, 0.7, cell_seed(0, 5, 9, 1)).valuations, 1, 10**9, impl=impl
        ),
        "mnw_assign(n=5,m=9)": lambda impl: kernels.mnw_assign(
            generate_bernoulli(5, 9, 0.7, cell_seed(0, 5, 9, 2)).valuations, 10**9, impl=impl
        ),
        "find_dominating(n=5,m=9)": lambda impl: kernels.find_dominating(
            generate_bernoulli(5, 9, 0.7, cell_seed(0, 5, 9, 3)).valuations,
            np.ones(5, dtype=np.int64),
            10**9,
            impl=impl,
        ),
    }

    print(f"{'kernel':35s} {'numba':>12s} {'python':>12s} {'speedup':>9s}")
    for name, call in cases.items():
        call(kernels.jit_impl)  # compile before timing
        fast = timed(lambda: call(kernels.jit_impl), args.repeats)
        slow = timed(lambda: call(kernels.py_impl), args.repeats)
        print(f"{name:35s} {fast * 1e3:10.2f}ms {slow * 1e3:10.2f}ms {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
