"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on representative workloads and prints a timing table.
Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import time

import numpy as np

from critexp._kernels import nb_impl, np_impl
from critexp.words import thue_morse_prefix


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    nb_impl.warmup()

    tau_4k = thue_morse_prefix(4096).digits
    tau_16k = thue_morse_prefix(16384).digits
    rng = np.random.Generator(np.random.PCG64(1))
    batch = rng.integers(0, 2, size=(10000, 64), dtype=np.uint8)
    empty = np.zeros(0, dtype=np.uint8)

    workloads = [
        ("prefix scan, 4096 digits", lambda impl: impl.prefix_exponents(tau_4k)),
        ("prefix scan, 16384 digits", lambda impl: impl.prefix_exponents(tau_16k)),
        ("batch exponents, 10000 x 64", lambda impl: impl.exponent_batch(batch)),
        ("witness search, 16384 digits", lambda impl: impl.find_witness(tau_16k, 2, 1)),
        ("extension DFS, depth 16", lambda impl: impl.dfs_minima(empty, 16, True, 0)),
        ("extension DFS, depth 18", lambda impl: impl.dfs_minima(empty, 18, True, 0)),
    ]

    print(f"{'workload':<32} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    for name, call in workloads:
        t_nb = timed(lambda: call(nb_impl), args.repeat)
        t_np = timed(lambda: call(np_impl), args.repeat)
        print(f"{name:<32} {t_nb * 1000:>8.1f}ms {t_np * 1000:>8.1f}ms {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
