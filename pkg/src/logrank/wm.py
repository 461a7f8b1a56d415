"""Zero-block decompositions ``P M Q`` and bilinear witnesses ``w^T M v = 0``.

Searches here are bounded: they return a certificate that passes an exact
check, or nothing.  Absence of a certificate is never a proof of
nonexistence beyond the sweep that was run.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from .linalg import (Matrix, as_matrix, complete_basis, det_Q, kernel_Q, left_kernel_Q,
                     matmul, primitive, rank_Q, transpose)
from .symbolic import SymbolicMatrix, decompose, multiply, row_col_dependence, structural_rank


@dataclass(frozen=True)
class ThresholdReport:
    structural_rank: int
    threshold: Fraction
    hypothesis: bool


def rank_threshold(m: SymbolicMatrix) -> ThresholdReport:
    """Structural rank against ``mn/(m+n)``."""
    r = structural_rank(m)
    t = Fraction(m.rows * m.cols, m.rows + m.cols)
    return ThresholdReport(r, t, r < t)


def meets_threshold(m_prime: int, n_prime: int, m: int, n: int) -> bool:
    return Fraction(m_prime, m) + Fraction(n_prime, n) > 1


@dataclass(frozen=True)
class ZeroBlockCertificate:
    p: Matrix
    q: Matrix
    m_prime: int
    n_prime: int


@dataclass(frozen=True)
class ZeroBlockCheck:
    ok: bool
    threshold_met: bool
    witness: tuple[int, int] | None = None  # a nonzero entry inside the block

    def __bool__(self) -> bool:
        return self.ok


def verify_zero_block(m: SymbolicMatrix, cert: ZeroBlockCertificate) -> ZeroBlockCheck:
    """Recompute ``P M Q`` and inspect its top-right ``m' x n'`` block."""
    P, Q = as_matrix(cert.p), as_matrix(cert.q)
    rows, cols = m.shape
    if len(P) != rows or any(len(r) != rows for r in P):
        raise ValueError("P has the wrong shape")
    if len(Q) != cols or any(len(r) != cols for r in Q):
        raise ValueError("Q has the wrong shape")
    if det_Q(P) == 0:
        raise ValueError("P is singular")
    if det_Q(Q) == 0:
        raise ValueError("Q is singular")
    mp, np_ = cert.m_prime, cert.n_prime
    if not (0 < mp <= rows and 0 < np_ <= cols):
        return ZeroBlockCheck(False, False, None)
    pmq = multiply(P, m, Q)
    for i in range(mp):
        for j in range(cols - np_, cols):
            if any(pmq.entry(i, j)):
                return ZeroBlockCheck(False, meets_threshold(mp, np_, rows, cols), (i, j))
    return ZeroBlockCheck(True, meets_threshold(mp, np_, rows, cols))


def _w_of(parts: Sequence[Matrix], vs: Sequence[Sequence], m: int) -> list[tuple[int, ...]]:
    """All w with ``w^T M_i v = 0`` for every part and every v."""
    if not vs:
        return [tuple(int(i == j) for i in range(m)) for j in range(m)]
    cols = [[sum(Fraction(part[i][k]) * v[k] for k in range(len(v))) for i in range(m)]
            for part in parts for v in vs]
    return left_kernel_Q(transpose(cols))


def _v_of(parts: Sequence[Matrix], ws: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """All v with ``w^T M_i v = 0`` for every part and every w."""
    if not ws:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    rows = [[sum(w[i] * Fraction(part[i][k]) for i in range(len(w))) for k in range(n)]
            for part in parts for w in ws]
    return kernel_Q(rows, n)


def _certificate(ws, vs, m: int, n: int) -> ZeroBlockCertificate:
    p_rows = complete_basis(ws, m)
    q_full = complete_basis(vs, n)
    q_cols = q_full[len(vs):] + q_full[:len(vs)]
    P = [[Fraction(x) for x in row] for row in p_rows]
    Q = transpose([[Fraction(x) for x in col] for col in q_cols])
    return ZeroBlockCertificate(P, Q, len(ws), len(vs))


def height_vectors(n: int, height: int) -> Iterator[tuple[int, ...]]:
    """Primitive integer vectors of height <= ``height``, first nonzero positive.

    Order: by height, then support size, then support, then values; so the
    unit vectors come first.
    """
    for h in range(1, height + 1):
        for size in range(1, n + 1):
            for support in itertools.combinations(range(n), size):
                for vals in itertools.product(range(-h, h + 1), repeat=size):
                    if 0 in vals or vals[0] < 0 or max(abs(x) for x in vals) != h:
                        continue
                    if gcd(*vals) != 1:
                        continue
                    v = [0] * n
                    for i, x in zip(support, vals):
                        v[i] = x
                    yield tuple(v)


def _canon(vs) -> tuple:
    if not vs:
        return ()
    from .linalg import rref
    r, piv = rref(vs)
    return tuple(tuple(row) for row in r[:len(piv)])


def _exhaustive(m: SymbolicMatrix, height: int) -> ZeroBlockCertificate | None:
    parts = decompose(m)
    rows, cols = m.shape
    cands = list(height_vectors(cols, height))
    visited: set = set()

    def closed(vs):
        ws = _w_of(parts, vs, rows)
        return ws, _v_of(parts, ws, cols)

    def dfs(vs, start):
        ws, vc = closed(vs)
        key = _canon(vc)
        if key in visited:
            return None
        visited.add(key)
        if ws and vc and meets_threshold(len(ws), len(vc), rows, cols):
            return ws, vc
        if not ws:
            return None
        for idx in range(start, len(cands)):
            v = cands[idx]
            if rank_Q(list(vc) + [v]) == len(vc):
                continue
            found = dfs(list(vc) + [v], idx + 1)
            if found:
                return found
        return None

    found = dfs([], 0)
    if found is None:
        return None
    return _certificate(found[0], found[1], rows, cols)


def _alternating(m: SymbolicMatrix, seed: int, iters: int) -> ZeroBlockCertificate | None:
    parts = decompose(m)
    rows, cols = m.shape
    rng = random.Random(seed)
    grid = [(a, b) for a in range(1, rows + 1) for b in range(1, cols + 1)
            if meets_threshold(a, b, rows, cols)]
    for mp, np_ in grid:
        for _ in range(iters):
            # seed either side with a random subspace of the target dimension
            if rng.random() < 0.5:
                ws = [[rng.randint(-3, 3) for _ in range(rows)] for _ in range(mp)]
                vs = _v_of(parts, ws, cols)
            else:
                vs = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(np_)]
            for _ in range(iters):
                if not vs:
                    break
                ws = _w_of(parts, vs, rows)
                new_vs = _v_of(parts, ws, cols)
                stable = _canon(new_vs) == _canon(vs)
                vs = new_vs
                if stable:
                    break
            if not vs:
                continue
            ws = _w_of(parts, vs, rows)
            if ws and meets_threshold(len(ws), len(vs), rows, cols):
                return _certificate(ws, vs, rows, cols)
    return None


def find_zero_block(m: SymbolicMatrix, strategy: str = "exhaustive", height: int = 2,
                    seed: int = 0, iters: int = 20) -> ZeroBlockCertificate | None:
    """Search for invertible P, Q with a threshold-meeting zero block in ``P M Q``.

    The search works with subspace pairs (W, V) such that ``w^T M_i v = 0``;
    every candidate V is closed under the Galois connection V -> W(V) -> V(W).
    ``exhaustive`` spans V by height-bounded integer vectors depth first;
    ``alternating`` iterates the connection from random seeds.
    """
    if m.rows == 0 or m.cols == 0:
        return None
    if strategy == "exhaustive":
        cert = _exhaustive(m, height)
    elif strategy == "alternating":
        cert = _alternating(m, seed, iters)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if cert is not None and not verify_zero_block(m, cert).ok:
        raise RuntimeError("search produced a certificate that does not verify")
    return cert


@dataclass(frozen=True)
class MccWitness:
    w: tuple[int, ...]
    v: tuple[int, ...]


def check_mcc_witness(m: SymbolicMatrix, wit: MccWitness) -> bool:
    if len(wit.w) != m.rows or len(wit.v) != m.cols:
        return False
    if not any(wit.w) or not any(wit.v):
        return False
    for k in range(m.space.size):
        s = sum(wit.w[i] * m.entries[i][j][k] * wit.v[j]
                for i in range(m.rows) for j in range(m.cols))
        if s != 0:
            return False
    return True


def mcc_witness(m: SymbolicMatrix, height: int) -> MccWitness | None:
    """First ``(w, v)`` with ``w^T M_i v = 0`` for all i, v of height <= bound."""
    if m.rows != m.cols:
        raise ValueError("matrix must be square")
    parts = decompose(m)
    for v in height_vectors(m.cols, height):
        ws = _w_of(parts, [v], m.rows)
        if ws:
            wit = MccWitness(primitive(ws[0]), v)
            if not check_mcc_witness(m, wit):
                raise RuntimeError("witness failed its check")
            return wit
    return None


@dataclass(frozen=True)
class SixExponentialsReport:
    structural_rank: int
    hypothesis: bool
    case: str  # "rows", "cols", "zero matrix", "hypothesis not met", "counterexample candidate"
    dependence: tuple[int, ...] | None
    zero_block: ZeroBlockCertificate | None


def six_exponentials_check(m: SymbolicMatrix, height: int = 2) -> SixExponentialsReport:
    """For 2x3 matrices of structural rank <= 1, find which side is Q-dependent."""
    if m.shape != (2, 3):
        raise ValueError("six exponentials check needs a 2x3 matrix")
    r = structural_rank(m)
    if r >= 2:
        return SixExponentialsReport(r, False, "hypothesis not met", None, None)
    if m.is_zero():
        return SixExponentialsReport(r, True, "zero matrix", None, None)
    dep = row_col_dependence(m)
    block = find_zero_block(m, "exhaustive", height)
    if dep is None or block is None:
        return SixExponentialsReport(r, True, "counterexample candidate",
                                     None if dep is None else dep.vector, block)
    return SixExponentialsReport(r, True, dep.side, dep.vector, block)


def planted_block(space, blocks: dict, p0: Matrix, q0: Matrix) -> SymbolicMatrix:
    """``P0^{-1} B Q0^{-1}`` for a symbolic matrix B given as parts."""
    from .linalg import inverse_Q
    from .symbolic import assemble

    parts = [matmul(matmul(inverse_Q(p0), blocks[k]), inverse_Q(q0)) for k in range(space.size)]
    return assemble(space, parts)
