"""Time each compiled kernel against its plain Python/numpy twin.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from tauca import kernels
from tauca._accel import HAS_NUMBA
from tauca.tau_machine import paper_system


def _system4(fn):
    steps = 20_000
    digits = np.zeros((steps + 1, 2, 4), dtype=np.int64)
    carries = np.zeros((steps, 2, 4), dtype=np.int64)
    fn(1000, steps, np.array([1, 0, 0, 0]), np.array([0, 0, 0, 0]), digits, carries)


def _rk4(fn):
    coefs, exps, comp = paper_system().packed()
    n = 100_000
    states = np.empty((n + 1, 2))
    fn(np.array([1.0, 0.0]), 1e-5, n, coefs, exps, comp, states)


def _v_sums(fn):
    fn(1500, 4000)


def _lcg(fn):
    out = np.empty(1_000_000, dtype=np.int64)
    fn(16807, 0, 2**31 - 1, 1, 1_000_000, out)


CASES = [
    ("system4_run (20k steps)", _system4, kernels.system4_run, kernels.system4_run_py),
    ("rk4_poly (1e5 steps)", _rk4, kernels.rk4_poly, kernels.rk4_poly_py),
    ("v_sum_of_products (a=1500)", _v_sums, kernels.v_sum_of_products, kernels.v_sum_of_products_py),
    ("lcg_stream (1e6)", _lcg, kernels.lcg_stream, kernels.lcg_stream_py),
]


def best_time(case, fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        case(fn)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"numba active: {HAS_NUMBA}")
    print(f"{'kernel':30s} {'compiled s':>11s} {'python s':>10s} {'speedup':>8s}")
    for name, case, fast, slow in CASES:
        case(fast)  # compile outside the timing
        tf = best_time(case, fast, args.repeat)
        ts = best_time(case, slow, 1)
        print(f"{name:30s} {tf:11.4f} {ts:10.4f} {ts / tf:8.1f}x")


if __name__ == "__main__":
    main()
