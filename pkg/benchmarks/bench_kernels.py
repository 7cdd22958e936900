#!/usr/bin/env python3
"""Benchmark the jitted mod-p kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeat N]

The same inputs go through both implementations; outputs are also
cross-checked so a speedup never hides a semantic drift.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rep2ldc import _kernels as K


def timeit(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref(rng, repeat):
    p = 10007
    mats = [rng.integers(0, p, size=(40, 40), dtype=np.int64) for _ in range(50)]

    def run(impl):
        for m in mats:
            impl(m, p)

    t_np = timeit(lambda: run(K.rref_mod_np), repeat=repeat)
    t_jit = timeit(lambda: run(K.rref_mod_jit), repeat=repeat) if K.rref_mod_jit else None
    for m in mats[:5]:
        a, ra, pa = K.rref_mod_np(m, p)
        if K.rref_mod_jit:
            b, rb, pb = K.rref_mod_jit(m, p)
            assert ra == rb and np.array_equal(a, b) and np.array_equal(pa, pb)
    return "rref_mod 50x(40x40, p=10007)", t_np, t_jit


def bench_matmul(rng, repeat):
    # group closure is dominated by many small products, so that is the
    # shape that matters here
    p = 10007
    pairs = [
        (
            rng.integers(0, p, size=(8, 8), dtype=np.int64),
            rng.integers(0, p, size=(8, 8), dtype=np.int64),
        )
        for _ in range(3000)
    ]

    def run(impl):
        for a, b in pairs:
            impl(a, b, p)

    t_np = timeit(lambda: run(K.matmul_mod_np), repeat=repeat)
    t_jit = timeit(lambda: run(K.matmul_mod_jit), repeat=repeat) if K.matmul_mod_jit else None
    a, b = pairs[0]
    if K.matmul_mod_jit:
        assert np.array_equal(K.matmul_mod_np(a, b, p), K.matmul_mod_jit(a, b, p))
    return "matmul_mod 3000x(8x8, p=10007)", t_np, t_jit


def bench_zscan(rng, repeat):
    p, n = 7, 6  # 117649 candidate vectors
    normals = rng.integers(0, p, size=(96, n), dtype=np.int64)
    normals[normals.sum(axis=1) == 0, 0] = 1

    t_np = timeit(lambda: K.best_z_exhaustive_np(normals, p, n), repeat=repeat)
    t_jit = (
        timeit(lambda: K.best_z_exhaustive_jit(normals, p, n), repeat=repeat)
        if K.best_z_exhaustive_jit
        else None
    )
    if K.best_z_exhaustive_jit:
        za, ca = K.best_z_exhaustive_np(normals, p, n)
        zb, cb = K.best_z_exhaustive_jit(normals, p, n)
        assert ca == cb and np.array_equal(za, zb)
    return f"best_z_exhaustive (96 normals, {p}^{n} candidates)", t_np, t_jit


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if K.NUMBA_IMPORTABLE:
        K.warmup()
        print("numba available; warmup done")
    else:
        print("numba NOT available (or disabled); timing numpy fallback only")

    rng = np.random.default_rng(0)
    rows = [
        bench_rref(rng, args.repeat),
        bench_matmul(rng, args.repeat),
        bench_zscan(rng, args.repeat),
    ]
    print(f"\n{'kernel':<48} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, t_np, t_jit in rows:
        if t_jit is None:
            print(f"{name:<48} {t_np * 1e3:>8.2f}ms {'-':>10} {'-':>8}")
        else:
            print(
                f"{name:<48} {t_np * 1e3:>8.2f}ms {t_jit * 1e3:>8.2f}ms "
                f"{t_np / t_jit:>7.1f}x"
            )


if __name__ == "__main__":
    main()
