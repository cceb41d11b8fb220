"""Benchmark the two greedy cosine-matching kernels: numba @njit vs pure numpy.

Run: python3 benchmarks/bench_bertscore.py
Set TRANSQUAD_NO_NUMBA=1 before importing transquad to see what the package
would fall back to; this script always times both paths explicitly.
"""

import time

import numpy as np

from transquad._kernels import (
    NUMBA_AVAILABLE,
    USE_NUMBA,
    greedy_match_numpy,
)

if NUMBA_AVAILABLE:
    from transquad._kernels import greedy_match_numba

print("=" * 64)
print("BERTScore greedy-matching kernel benchmark")
print("=" * 64)
print(f"numba available: {NUMBA_AVAILABLE}   package default: "
      f"{'numba' if USE_NUMBA else 'numpy'}")
print()

rng = np.random.default_rng(0)

if NUMBA_AVAILABLE:
    print("Warming up JIT compilation...")
    warm = rng.normal(size=(4, 8))
    greedy_match_numba(warm, warm)
    print("warmup complete.\n")


def time_kernel(fn, gold, pred, n_runs):
    times = []
    result = None
    for _ in range(n_runs):
        start = time.perf_counter()
        result = fn(gold, pred)
        times.append(time.perf_counter() - start)
    return np.mean(times), np.std(times), result


# (gold tokens, pred tokens, embedding dim): typical QA answers are short,
# so the small cases matter as much as the big ones.
CASES = [
    (4, 4, 768, 2000),
    (16, 16, 768, 1000),
    (64, 64, 768, 200),
    (128, 128, 1024, 50),
]

for n_gold, n_pred, dim, n_runs in CASES:
    gold = rng.normal(size=(n_gold, dim))
    pred = rng.normal(size=(n_pred, dim))
    print("-" * 64)
    print(f"gold {n_gold} x pred {n_pred} tokens, dim {dim} ({n_runs} runs)")
    mean_np, std_np, result_np = time_kernel(greedy_match_numpy, gold, pred, n_runs)
    print(f"  numpy : {mean_np * 1e6:10.1f} +/- {std_np * 1e6:8.1f} us")
    if NUMBA_AVAILABLE:
        mean_nb, std_nb, result_nb = time_kernel(greedy_match_numba, gold, pred, n_runs)
        print(f"  numba : {mean_nb * 1e6:10.1f} +/- {std_nb * 1e6:8.1f} us")
        speedup = mean_np / mean_nb
        print(f"  numba speedup over numpy: {speedup:.2f}x")
        agree = np.allclose(result_np, result_nb, atol=1e-12)
        print(f"  results agree within 1e-12: {agree}")
        if not agree:
            raise SystemExit("kernel disagreement; investigate before trusting either")
print("-" * 64)
