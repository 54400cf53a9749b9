#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs the three hot scans under both backends and prints wall times plus a
result-equality check.  Usage:

    python benchmarks/bench_kernels.py [--repeat 3]

The same selection can be forced process-wide with STARTRACE_KERNELS.
"""

import argparse
import time

import numpy as np

from startrace import _accel
from startrace.fields import PrimeField
from startrace.matrices import enumerate_rank_one_idempotents
from startrace.classify import classify_brute
from startrace.perturbation import scale_trace_map
from startrace.products import _tensor_ints, tensor_from_perturbation
from startrace.matrices import Matrix


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(name, make_fn, repeat):
    results = {}
    times = {}
    for backend in ("numba", "numpy"):
        try:
            _accel.force_backend(backend)
        except ValueError:
            continue
        try:
            _accel.backend_name()
        except ImportError:
            print(f"{name:<28} {backend:<6} unavailable")
            continue
        fn = make_fn()
        times[backend], results[backend] = timed(fn, repeat)
    _accel.force_backend(None)
    agree = len(results) < 2 or results["numba"] == results["numpy"]
    for backend, dt in times.items():
        print(f"{name:<28} {backend:<6} {dt * 1000:10.2f} ms")
    if "numba" in times and "numpy" in times and times["numba"] > 0:
        print(f"{name:<28} speedup numba/numpy: {times['numpy'] / times['numba']:.2f}x"
              f"   results agree: {agree}")
    if not agree:
        raise SystemExit(f"backend disagreement in {name}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    gf2 = PrimeField(2)
    gf13 = PrimeField(13)

    def census():
        def run():
            rep = classify_brute(gf2, 2, scope="all_g", seed=0)
            return tuple(rep.admissible["indices"])
        return run

    def idempotents():
        def run():
            enumerate_rank_one_idempotents.cache_clear()
            return enumerate_rank_one_idempotents(gf13, 2)
        return run

    def assoc():
        g = scale_trace_map(gf13, 3, gf13.from_int(5), Matrix.zero(gf13, 3))
        C = _tensor_ints(tensor_from_perturbation(g))

        def run():
            return _accel.assoc_first_violation(C, 13)
        return run

    print(f"numpy {np.__version__}; repeat={args.repeat} (best-of)")
    bench("gf2-census-65536", census, args.repeat)
    bench("idempotent-scan-gf13", idempotents, args.repeat)
    bench("assoc-scan-gf13-n3", assoc, args.repeat)


if __name__ == "__main__":
    main()
