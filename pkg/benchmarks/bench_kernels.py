#!/usr/bin/env python3
"""Compiled kernels against their plain-Python bodies.

Run: python3 benchmarks/bench_kernels.py [--runs N] [--json]
"""

import argparse
import json
import random
import time

import numpy as np

from quasiwide._accel import USE_NUMBA
from quasiwide.generators import cycle_graph, grid_graph, random_sparse_graph
from quasiwide.kernels import (
    all_pairs_bfs,
    densest_subset_bruteforce,
    grad_search,
    valid_block_flags,
)
from quasiwide.minors import _ball_masks, _grad_kernel


def best_of(fn, runs):
    fn()  # warm up, triggers compilation
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    rng = random.Random(7)
    big = random_sparse_graph(rng, 60, 3.0)
    mid = grid_graph(4, 4)
    small = random_sparse_graph(rng, 11, 3.0)
    indptr, indices = big.csr
    n_big = len(big.vertices)
    yield (
        "all_pairs_bfs n=60",
        lambda f: f(indptr, indices, n_big),
        all_pairs_bfs,
    )
    nbr = mid.nbr_masks
    balls = _ball_masks(mid, 1)
    yield (
        "valid_block_flags grid4x4 r=1",
        lambda f: f(nbr, balls, 16, True),
        valid_block_flags,
    )
    nbr_d = mid.nbr_masks
    yield (
        "densest_subset_bruteforce grid4x4",
        lambda f: f(nbr_d, 16),
        densest_subset_bruteforce,
    )
    c10 = cycle_graph(10)
    yield (
        "grad_search C10 r=1",
        lambda f: _grad_kernel(c10, 1, search=f),
        grad_search,
    )
    yield (
        "grad_search sparse n=11 r=1",
        lambda f: _grad_kernel(small, 1, search=f),
        grad_search,
    )


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return tuple(np.atleast_1d(a)) == tuple(np.atleast_1d(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    if not USE_NUMBA:
        print("QUASIWIDE_NO_NUMBA is set; both columns run plain Python")
    rows = []
    for name, call, k in cases():
        t_jit, r_jit = best_of(lambda: call(k), args.runs)
        t_py, r_py = best_of(lambda: call(k.py_func), args.runs)
        rows.append(
            {
                "kernel": name,
                "numba_s": t_jit,
                "python_s": t_py,
                "speedup": t_py / t_jit if t_jit > 0 else float("inf"),
                "match": bool(same(r_jit, r_py)),
            }
        )
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'kernel':36} {'numba':>10} {'python':>10} {'speedup':>8}  match")
    for r in rows:
        print(
            f"{r['kernel']:36} {r['numba_s']:10.5f} {r['python_s']:10.5f} "
            f"{r['speedup']:8.1f}  {r['match']}"
        )
    if not all(r["match"] for r in rows):
        raise SystemExit("compiled and fallback results differ")


if __name__ == "__main__":
    main()
