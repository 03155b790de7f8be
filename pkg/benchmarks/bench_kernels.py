#!/usr/bin/env python3
"""Benchmark the compiled bit-stream kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--bits 8000000] [--repeats 3]

Both backends compute identical integers; the point of the extension is
the battery's wall-clock on multi-megabit streams, so that's what is
measured here.
"""
import argparse
import time

import numpy as np

from qra import _bitkernels_py as py_impl

try:
    from qra import _bitkernels as cy_impl
except ImportError:
    cy_impl = None


def time_of(fn, args, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bits", type=int, default=8_000_000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    bits = (rng.random(args.bits) < 0.5).astype(np.uint8)
    template = np.ones(9, dtype=np.uint8)

    cases = [
        ("transitions", (bits,)),
        ("longest_runs (M=10^4)", (bits, 10 ** 4)),
        ("gf2_ranks (32x32)", (bits, 32)),
        ("template_counts (M=1032)", (bits, template, 1032)),
        ("pattern_counts (m=16)", (bits, 16)),
    ]
    name_of = {"transitions": "transitions", "longest_runs (M=10^4)": "longest_runs",
               "gf2_ranks (32x32)": "gf2_ranks",
               "template_counts (M=1032)": "template_counts",
               "pattern_counts (m=16)": "pattern_counts"}

    print(f"stream: {args.bits:,} bits, best of {args.repeats}")
    print(f"{'kernel':28s} {'numpy':>10s} {'cython':>10s} {'speedup':>9s}")
    for label, call_args in cases:
        fn = name_of[label]
        t_py, r_py = time_of(getattr(py_impl, fn), call_args, args.repeats)
        if cy_impl is None:
            print(f"{label:28s} {t_py * 1e3:9.1f}ms {'-':>10s} {'-':>9s}")
            continue
        t_cy, r_cy = time_of(getattr(cy_impl, fn), call_args, args.repeats)
        same = np.array_equal(np.asarray(r_py), np.asarray(r_cy))
        flag = "" if same else "  RESULTS DIFFER!"
        print(f"{label:28s} {t_py * 1e3:9.1f}ms {t_cy * 1e3:9.1f}ms "
              f"{t_py / t_cy:8.1f}x{flag}")
    if cy_impl is None:
        print("\ncompiled extension not built; run pip install -e . to build it")


if __name__ == "__main__":
    main()
