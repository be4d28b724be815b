"""Timing comparison of the two pairwise-Jaccard backends.

Both fills produce the same matrix; this script reports best-of-N wall
times per matrix size so the numba path can justify its existence on
the machine at hand.  Run directly:

    python3 benchmarks/bench_jaccard_kernel.py [--sizes 50 200 800]
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from revkit.kernels import HAS_NUMBA, jaccard_matrix


def random_sets(rng: random.Random, count: int, vocab_size: int) -> list[frozenset[str]]:
    # sentence-sized sets drawn from a shared vocabulary, so pairs hit a
    # realistic mix of empty and partial intersections
    vocab = [f"w{k}" for k in range(vocab_size)]
    return [frozenset(rng.sample(vocab, rng.randint(5, 40))) for _ in range(count)]


def best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        times.append(time.perf_counter() - started)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description="compare the jaccard_matrix backends")
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 200, 800])
    ap.add_argument("--vocab", type=int, default=5000)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"numba importable: {HAS_NUMBA}")
    header = f"{'matrix':>12} {'numpy':>12} {'numba':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        sets_a = random_sets(rng, n, args.vocab)
        sets_b = random_sets(rng, n, args.vocab)
        base = jaccard_matrix(sets_a, sets_b, backend="numpy")
        t_np = best_of(lambda: jaccard_matrix(sets_a, sets_b, backend="numpy"), args.repeats)
        if not HAS_NUMBA:
            print(f"{n:>6}x{n:<5} {t_np * 1e3:>10.2f}ms {'-':>12} {'-':>9}")
            continue
        # first call includes compilation; warm up before timing
        got = jaccard_matrix(sets_a, sets_b, backend="numba")
        if not np.array_equal(base, got):
            raise SystemExit("backends disagree; timings would be meaningless")
        t_nb = best_of(lambda: jaccard_matrix(sets_a, sets_b, backend="numba"), args.repeats)
        print(f"{n:>6}x{n:<5} {t_np * 1e3:>10.2f}ms {t_nb * 1e3:>10.2f}ms {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
