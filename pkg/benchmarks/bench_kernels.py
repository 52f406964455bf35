#!/usr/bin/env python3
"""Benchmark the numba and numpy kernel backends against each other.

Run with no arguments: the script re-executes itself once per backend (the
backend is chosen at import time via QUASIRAND_BACKEND) and prints a
comparison table.  Numba timings are steady-state: each workload runs once
for compilation before the timed repetitions.

    python3 benchmarks/bench_kernels.py
"""

import argparse
import os
import subprocess
import sys
import time


def workloads():
    import numpy as np

    import quasirand as q

    g_cycle = q.generate_gnp(120, 0.3, seed=1)
    g_path = q.generate_gnp(200, 0.5, seed=2)
    sets = [list(range(i * 30, (i + 1) * 30)) for i in range(4)]
    g_parts = q.generate_gnp(120, 0.5, seed=3)

    return [
        ("labeled cycle4, G(120, .3)",
         lambda: q.count_labeled(g_cycle, q.cycle4())),
        ("induced path3, G(200, .5)",
         lambda: q.count_induced(g_path, q.path3())),
        ("induced phi, 4 parts of 30",
         lambda: q.count_induced_phi(g_parts, q.path3(), sets, (0, 2, 3))),
        ("dichotomy scan, path3 r=5",
         lambda: q.gcd_dichotomy_search(q.path3(), 5, 0.5).min_max_deviation),
        ("dichotomy scan, cycle4 r=6",
         lambda: q.gcd_dichotomy_search(q.cycle4(), 6, 0.3).min_max_deviation),
        ("predicate scan, n=7",
         lambda: len(q.classify_pairwise_regular_up_to(7)[7])),
    ]


def run_single(repeats: int) -> None:
    from quasirand import backend

    print(f"# backend: {backend()}", flush=True)
    for name, fn in workloads():
        fn()                           # warm-up (JIT compile on the numba path)
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            value = fn()
            best = min(best, time.perf_counter() - t0)
        print(f"{name}\t{best:.6f}\t{value}", flush=True)


def run_comparison(repeats: int) -> None:
    results = {}
    for backend_name in ("numba", "numpy"):
        env = dict(os.environ, QUASIRAND_BACKEND=backend_name)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--single",
             "--repeats", str(repeats)],
            env=env, capture_output=True, text=True, check=True,
        )
        rows = {}
        for line in proc.stdout.splitlines():
            if line.startswith("#") or not line.strip():
                continue
            name, seconds, value = line.split("\t")
            rows[name] = (float(seconds), value)
        results[backend_name] = rows

    names = list(results["numba"])
    width = max(len(n) for n in names)
    print(f"{'workload':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for name in names:
        t_nb, v_nb = results["numba"][name]
        t_np, v_np = results["numpy"][name]
        flag = "" if v_nb == v_np else "  RESULTS DIFFER"
        print(f"{name:<{width}}  {t_nb:>9.4f}s  {t_np:>9.4f}s  "
              f"{t_np / t_nb:>7.1f}x{flag}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--single", action="store_true",
                        help="run the current backend only (internal)")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    if args.single:
        run_single(args.repeats)
    else:
        run_comparison(args.repeats)


if __name__ == "__main__":
    main()
