"""Fixed-width modular elimination kernels.

These back the randomized routes (Schwartz-Zippel rank probes, randomized
determinant checks).  Each kernel has a numba-compiled loop version and a
vectorized numpy version; set ``LOGRANK_DISABLE_NUMBA=1`` to force numpy.
Exact answers never depend on these kernels alone.
"""

from __future__ import annotations

import os

import numpy as np

# 2**31 - 1: products of two residues fit in int64
PRIME = 2147483647

_DISABLED = os.environ.get("LOGRANK_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised through the env flag
    HAVE_NUMBA = False


def _powmod(x, e, p):
    result = 1
    x %= p
    while e > 0:
        if e & 1:
            result = (result * x) % p
        x = (x * x) % p
        e >>= 1
    return result


def _elim_loops(a, p):
    # in-place row echelon form mod p; returns (rank, pivot_rows, pivot_cols, det_sign_flips)
    rows, cols = a.shape
    perm = np.arange(rows)
    piv_cols = np.empty(min(rows, cols), dtype=np.int64)
    rank = 0
    swaps = 0
    for c in range(cols):
        if rank == rows:
            break
        pr = -1
        for r in range(rank, rows):
            if a[r, c] != 0:
                pr = r
                break
        if pr < 0:
            continue
        if pr != rank:
            for k in range(cols):
                t = a[rank, k]
                a[rank, k] = a[pr, k]
                a[pr, k] = t
            t2 = perm[rank]
            perm[rank] = perm[pr]
            perm[pr] = t2
            swaps += 1
        inv = _powmod(a[rank, c], p - 2, p)
        for r in range(rank + 1, rows):
            f = a[r, c]
            if f != 0:
                f = (f * inv) % p
                for k in range(c, cols):
                    a[r, k] = (a[r, k] - f * a[rank, k]) % p
        piv_cols[rank] = c
        rank += 1
    return rank, perm[:rank].copy(), piv_cols[:rank].copy(), swaps


def _elim_numpy(a, p):
    rows, cols = a.shape
    perm = np.arange(rows)
    piv_cols = []
    rank = 0
    swaps = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        pr = rank + int(nz[0])
        if pr != rank:
            a[[rank, pr]] = a[[pr, rank]]
            perm[[rank, pr]] = perm[[pr, rank]]
            swaps += 1
        inv = pow(int(a[rank, c]), p - 2, p)
        f = (a[rank + 1:, c] * inv) % p
        a[rank + 1:, c:] = (a[rank + 1:, c:] - np.outer(f, a[rank, c:]) % p) % p
        piv_cols.append(c)
        rank += 1
    return rank, perm[:rank].copy(), np.array(piv_cols, dtype=np.int64), swaps


def _eval_loops(exps, coefs, points, p):
    k = points.shape[0]
    t, n = exps.shape
    out = np.zeros(k, dtype=np.int64)
    for i in range(k):
        acc = 0
        for j in range(t):
            term = coefs[j]
            for v in range(n):
                e = exps[j, v]
                if e:
                    term = (term * _powmod(points[i, v], e, p)) % p
            acc = (acc + term) % p
        out[i] = acc
    return out


def _eval_numpy(exps, coefs, points, p):
    k = points.shape[0]
    out = np.zeros(k, dtype=np.int64)
    for j in range(exps.shape[0]):
        term = np.full(k, coefs[j], dtype=np.int64)
        for v in range(exps.shape[1]):
            e = int(exps[j, v])
            if e:
                col = points[:, v] % p
                pw = np.ones(k, dtype=np.int64)
                base = col.copy()
                while e:
                    if e & 1:
                        pw = (pw * base) % p
                    base = (base * base) % p
                    e >>= 1
                term = (term * pw) % p
        out = (out + term) % p
    return out


if HAVE_NUMBA:
    _powmod = njit(cache=True)(_powmod)
    _elim_fast = njit(cache=True)(_elim_loops)
    _eval_fast = njit(cache=True)(_eval_loops)
else:
    _elim_fast = _elim_numpy
    _eval_fast = _eval_numpy


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def residue(x, p: int = PRIME) -> int:
    """Image of an int or Fraction in Z/p; the denominator must be a unit."""
    den = getattr(x, "denominator", 1)
    num = getattr(x, "numerator", x)
    if den == 1:
        return int(num) % p
    if den % p == 0:
        raise ZeroDivisionError(f"denominator divisible by {p}")
    return int(num) * pow(int(den), -1, p) % p


def _as_residues(a, p) -> np.ndarray:
    arr = np.array([[residue(x, p) for x in row] for row in a], dtype=np.int64)
    if arr.ndim != 2:
        arr = arr.reshape(len(a), -1)
    return arr


def row_echelon_mod_p(a, p: int = PRIME, use_numba: bool | None = None):
    """Rank profile of an integer matrix modulo ``p``.

    Returns ``(rank, pivot_rows, pivot_cols)`` in original indices; the minor
    on those rows and columns is nonzero mod ``p``.
    """
    work = _as_residues(a, p)
    if work.size == 0:
        return 0, [], []
    fn = _pick(_elim_fast, _elim_numpy, use_numba)
    rank, rows, cols, _ = fn(work, p)
    return int(rank), [int(r) for r in rows], [int(c) for c in cols]


def rank_mod_p(a, p: int = PRIME, use_numba: bool | None = None) -> int:
    return row_echelon_mod_p(a, p, use_numba)[0]


def det_mod_p(a, p: int = PRIME, use_numba: bool | None = None) -> int:
    work = _as_residues(a, p)
    n = work.shape[0]
    if work.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    fn = _pick(_elim_fast, _elim_numpy, use_numba)
    rank, _, _, swaps = fn(work, p)
    if rank < n:
        return 0
    d = 1
    for i in range(n):
        d = d * int(work[i, i]) % p
    return (-d) % p if swaps % 2 else d


def poly_eval_mod_p(exps, coefs, points, p: int = PRIME, use_numba: bool | None = None) -> np.ndarray:
    """Evaluate one sparse polynomial at many points modulo ``p``."""
    exps = np.asarray(exps, dtype=np.int64).reshape(len(coefs), -1)
    coefs = np.asarray([int(c) % p for c in coefs], dtype=np.int64)
    points = np.asarray(points, dtype=np.int64) % p
    if points.ndim == 1:
        points = points.reshape(1, -1)
    if len(coefs) == 0:
        return np.zeros(points.shape[0], dtype=np.int64)
    fn = _pick(_eval_fast, _eval_numpy, use_numba)
    return fn(exps, coefs, points, p)


def _pick(fast, slow, use_numba):
    if use_numba is None:
        return fast
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but unavailable")
    return fast if use_numba else slow
