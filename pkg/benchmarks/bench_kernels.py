"""Compare the numba and numpy modular kernels.

Runs each kernel on the same random inputs with both backends, checks the
answers agree, and prints best-of timings.  Usage:

    python benchmarks/bench_kernels.py [--sizes 16 32 64] [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import time

from logrank import kernels


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(sizes, repeat: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    p = kernels.PRIME
    rows = []
    for n in sizes:
        a = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        exps = [[rng.randrange(4) for _ in range(6)] for _ in range(8 * n)]
        coefs = [rng.randrange(p) for _ in range(8 * n)]
        pts = [[rng.randrange(p) for _ in range(6)] for _ in range(n)]
        cases = {
            "rank_mod_p": lambda flag: kernels.rank_mod_p(a, use_numba=flag),
            "det_mod_p": lambda flag: kernels.det_mod_p(a, use_numba=flag),
            "poly_eval_mod_p": lambda flag: tuple(kernels.poly_eval_mod_p(exps, coefs, pts, use_numba=flag)),
        }
        for name, fn in cases.items():
            slow = fn(False)
            t_np = _best(lambda: fn(False), repeat)
            if kernels.HAVE_NUMBA:
                fast = fn(True)  # first call compiles (or loads the cache)
                if fast != slow:
                    raise SystemExit(f"{name} n={n}: backends disagree")
                t_nb = _best(lambda: fn(True), repeat)
            else:
                t_nb = float("nan")
            rows.append((name, n, t_np, t_nb))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"backend available: {kernels.backend()}")
    print(f"{'kernel':<16} {'n':>5} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}")
    for name, n, t_np, t_nb in bench(args.sizes, args.repeat, args.seed):
        print(f"{name:<16} {n:>5} {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
