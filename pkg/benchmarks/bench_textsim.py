#!/usr/bin/env python3
"""Benchmark the snippet-similarity kernels: compiled extension vs the
pure-Python fallback, on workloads shaped like real lifecycle matching
(many short code-line pairs).

Usage: python benchmarks/bench_textsim.py [--pairs N] [--repeat R]
"""

from __future__ import annotations

import argparse
import random
import string
import time

from mlsmells import textsim
from mlsmells._kernels import _editdist_py

TEMPLATES = [
    'val_{t} = df["col_{t}"]["key_{t}"]',
    "flag_{t} = (x_{t} == np.nan)",
    "arr_{t} = frame_{t}.values",
    "m_{t} = np.dot(a_{t}, b_{t})",
    'joined_{t} = left.merge(right, on="{t}")',
    "loss.backward()  # accumulate {t}",
]


def make_pairs(n: int, seed: int) -> list[tuple[str, str]]:
    rng = random.Random(seed)
    pairs = []
    for _ in range(n):
        template = rng.choice(TEMPLATES)
        token_a = "".join(rng.choice(string.ascii_lowercase) for _ in range(10))
        if rng.random() < 0.5:
            token_b = token_a  # unchanged snippet (the common case across commits)
        else:
            token_b = "".join(rng.choice(string.ascii_lowercase) for _ in range(10))
        pairs.append((template.format(t=token_a), template.format(t=token_b)))
    return pairs


def bench(fn, pairs: list[tuple[str, str]], repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for a, b in pairs:
            fn(a, b)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=50_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    pairs = make_pairs(args.pairs, args.seed)
    sample = pairs[: min(500, len(pairs))]
    for a, b in sample:
        assert textsim.similarity(a, b) == _editdist_py.similarity(a, b), (a, b)

    pure = bench(_editdist_py.similarity, pairs, args.repeat)
    print(f"pure-python : {args.pairs / pure:>12.0f} pairs/s  ({pure:.3f}s best of {args.repeat})")
    if textsim.BACKEND == "compiled":
        compiled = bench(textsim.similarity, pairs, args.repeat)
        print(f"compiled    : {args.pairs / compiled:>12.0f} pairs/s  ({compiled:.3f}s best of {args.repeat})")
        print(f"speedup     : {pure / compiled:.1f}x")
    else:
        print("compiled    : extension not built (textsim is using the fallback)")


if __name__ == "__main__":
    main()
