"""Benchmark the compiled kernels against the pure-numpy fallback.

The backend is chosen at import time from the ``PURSUITLAB_NO_NUMBA``
environment variable, so the comparison runs each side in a child process
and the parent prints a side-by-side table:

    python3 benchmarks/bench_kernels.py

Workloads cover both regimes the kernels serve: batches of tiny problems
(where Python-level loop overhead dominates and compilation pays off most)
and single desk-scale problems (where BLAS does the heavy lifting and the
two paths should be close).
"""

import json
import os
import subprocess
import sys
import time


def _best_of(fn, repeats=5):
    """Smallest wall time over several calls, in seconds."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _child():
    import numpy as np

    import pursuitlab as pl

    rng = np.random.default_rng(0)

    tiny = []
    for _ in range(200):
        a = pl.gen_gaussian_sensing(24, 60, rng)
        s = pl.gen_sparse(60, 3, rng)
        y = a @ s + 0.01 * rng.standard_normal(24)
        tiny.append((a, y))
    desk_a = pl.gen_gaussian_sensing(512, 2048, rng)
    desk_s = pl.gen_sparse(2048, 10, rng)
    desk_y = desk_a @ desk_s + 0.01 * rng.standard_normal(512)
    scan_a = pl.gen_gaussian_sensing(16, 12, rng)

    tiny_opts = pl.PursuitOptions(k=3)
    iht_opts = pl.PursuitOptions(k=3, max_iters=300)
    desk_opts = pl.PursuitOptions(k=10)

    def run_batch(recover, opts):
        for a, y in tiny:
            recover(a, y, opts)

    timings = {
        "cosamp 200x tiny (24x60, k=3)":
            _best_of(lambda: run_batch(pl.cosamp, tiny_opts)),
        "sp 200x tiny (24x60, k=3)":
            _best_of(lambda: run_batch(pl.sp, tiny_opts)),
        "iht 200x tiny (24x60, k=3)":
            _best_of(lambda: run_batch(pl.iht, iht_opts)),
        "cosamp 1x desk (512x2048, k=10)":
            _best_of(lambda: pl.cosamp(desk_a, desk_y, desk_opts)),
        "exact_ric (16x12, k=6, 924 subsets)":
            _best_of(lambda: pl.exact_ric(scan_a, 6)),
        "k_col_spectral_norm sampled (512x2048, k=10, 500 draws)":
            _best_of(lambda: pl.k_col_spectral_norm(
                desk_a, 10, mode="sampled", budget=500)),
    }
    json.dump({"using_numba": pl.USING_NUMBA, "timings": timings}, sys.stdout)


def _run_side(no_numba):
    env = dict(os.environ)
    if no_numba:
        env["PURSUITLAB_NO_NUMBA"] = "1"
    else:
        env.pop("PURSUITLAB_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--child"],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout)


def main():
    if "--child" in sys.argv:
        _child()
        return
    print("timing compiled backend (cold start includes cache load)...")
    compiled = _run_side(no_numba=False)
    print("timing pure-numpy fallback...")
    fallback = _run_side(no_numba=True)
    assert compiled["using_numba"] and not fallback["using_numba"]

    width = max(len(name) for name in compiled["timings"])
    print(f"\n{'workload':<{width}}  {'compiled':>10}  {'numpy':>10}  speedup")
    for name, fast in compiled["timings"].items():
        slow = fallback["timings"][name]
        print(f"{name:<{width}}  {fast:>9.4f}s  {slow:>9.4f}s  "
              f"{slow / fast:>6.1f}x")


if __name__ == "__main__":
    main()
