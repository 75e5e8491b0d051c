#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Covers the two hot loops: the all-pairs two-leader sweep (driving the
exhaustive 2-leader searches) and Euler-Maruyama stepping (driving the
stochastic validation runs). Run after installing the package:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

import coherence_lab as cl
from coherence_lab._kernels import _numpy_impl

try:
    from coherence_lab._kernels import _speedups
except ImportError:
    _speedups = None


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_pair_sweep():
    print("two_leader_totals: all-pairs sweep over the resistance table")
    for spec in ("tree:2:5", "tree:3:4", "tree:4:4"):
        from coherence_lab.cli import parse_graph_spec

        g, label, _ = parse_graph_spec(spec)
        R = cl.resistance_oracle(g).table
        t_np, a = timeit(lambda: _numpy_impl.two_leader_totals(R))
        line = f"  {label:10s} n={g.node_count:4d}  numpy {t_np * 1e3:8.2f} ms"
        if _speedups is not None:
            t_cy, b = timeit(lambda: _speedups.two_leader_totals(R))
            drift = np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))
            line += (f"  compiled {t_cy * 1e3:8.2f} ms  speedup "
                     f"{t_np / t_cy:5.1f}x  max rel drift {drift:.1e}")
        print(line)


def bench_em_stepping():
    print("em_accumulate: Euler-Maruyama stepping, 50k steps")
    rng = np.random.default_rng(0)
    for n, trials in ((2, 8), (8, 12), (32, 16)):
        g = cl.build_cycle(n + 1)
        A = np.ascontiguousarray(cl.laplacian(g)[1:, 1:])
        steps = 50_000
        noise = np.ascontiguousarray(rng.standard_normal((steps, n, trials)))

        def run(impl):
            X = np.zeros((n, trials))
            acc = np.zeros(trials)
            impl.em_accumulate(A, X, noise, 1e-3, steps // 4, acc)
            return acc

        t_np, a = timeit(lambda: run(_numpy_impl), repeats=2)
        line = f"  n={n:3d} trials={trials:3d}  numpy {t_np:8.3f} s"
        if _speedups is not None:
            t_cy, b = timeit(lambda: run(_speedups), repeats=2)
            drift = np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))
            line += (f"  compiled {t_cy:8.3f} s  speedup {t_np / t_cy:5.1f}x"
                     f"  max rel drift {drift:.1e}")
        print(line)


def main():
    from coherence_lab import kernel_backend

    print(f"active backend: {kernel_backend}")
    if _speedups is None:
        print("compiled extension not built; showing numpy timings only")
    bench_pair_sweep()
    bench_em_stepping()


if __name__ == "__main__":
    main()
