"""Exact linear algebra over Q and over Q[x_1, ..., x_n].

Matrices are lists of rows.  Rational entries are Fractions; polynomial
entries are :class:`MultiPoly` values sharing one variable count.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from . import kernels
from .core import MultiPoly, format_rational, to_fraction

log = logging.getLogger(__name__)

Matrix = list[list[Fraction]]
PolyMatrix = list[list[MultiPoly]]

# above this size rank_poly switches to the randomized route
BAREISS_LIMIT = 8


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    rows = [[to_fraction(x) for x in row] for row in rows]
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    """Product of two matrices over any ring with ``+`` and ``*``."""
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {shape(a)} x {shape(b)}")
    bt = transpose(b)
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                t = x * y
                acc = t if acc is None else acc + t
            new.append(acc if acc is not None else 0)
        out.append(new)
    return out


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, first nonzero positive."""
    v = [to_fraction(x) for x in v]
    nz = [x for x in v if x]
    if not nz:
        raise ValueError("zero vector has no primitive form")
    den = lcm(*(x.denominator for x in nz))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    sign = 1 if nz[0] > 0 else -1
    return tuple(sign * x // g for x in ints)


def rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = as_matrix(m)
    rows, cols = shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = next((i for i in range(r, rows) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank_kernel_Q(m: Sequence[Sequence], ncols: int | None = None) -> tuple[int, list[tuple[int, ...]]]:
    """Rank and a kernel basis of a rational matrix.

    The basis has one vector per free column, in the echelon pattern of the
    reduced row echelon form, each scaled to a primitive integer vector.
    ``ncols`` is needed only when ``m`` has no rows.
    """
    if not m:
        n = ncols or 0
        return 0, [tuple(int(i == j) for i in range(n)) for j in range(n)]
    r, pivots = rref(m)
    cols = len(r[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][f]
        basis.append(primitive(v))
    return len(pivots), basis


def rank_Q(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def kernel_Q(m: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    return rank_kernel_Q(m, ncols)[1]


def left_kernel_Q(m: Sequence[Sequence]) -> list[tuple[int, ...]]:
    if not m:
        return []
    if not m[0]:
        return kernel_Q([], len(m))
    return kernel_Q(transpose(m), len(m))


def det_Q(m: Sequence[Sequence]) -> Fraction:
    a = as_matrix(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c]), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def inverse_Q(m: Sequence[Sequence]) -> Matrix:
    a = as_matrix(m)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("inverse of a non-square matrix")
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def complete_basis(vectors: Sequence[Sequence], dim: int) -> list[tuple]:
    """Extend independent vectors to a basis of Q^dim with standard vectors."""
    basis = [tuple(to_fraction(x) for x in v) for v in vectors]
    for i in range(dim):
        e = tuple(Fraction(int(i == j)) for j in range(dim))
        if rank_Q(basis + [e]) > len(basis):
            basis.append(e)
        if len(basis) == dim:
            break
    return basis


# -- polynomial matrices ---------------------------------------------------


def poly_nvars(m: PolyMatrix) -> int:
    counts = {e.nvars for row in m for e in row}
    if len(counts) > 1:
        raise ValueError("entries do not share one variable count")
    return counts.pop() if counts else 0


def _perm_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass
class Elimination:
    """Outcome of fraction-free elimination on a polynomial matrix."""

    rank: int
    pivot_rows: list[int]
    pivot_cols: list[int]
    # determinant of the minor on pivot_rows x pivot_cols, in that order
    minor_det: MultiPoly


def _unit_phase(m: PolyMatrix, nvars: int):
    """Eliminate with nonzero constant pivots (Markowitz choice).

    Returns (pivots, product of pivot constants, remaining sparse rows).
    Row operations divide only by constants, so entries stay polynomial.
    """
    rows = {i: {j: e for j, e in enumerate(row) if e} for i, row in enumerate(m)}
    colmap: dict[int, set[int]] = {}
    for i, row in rows.items():
        for j in row:
            colmap.setdefault(j, set()).add(i)
    pivots: list[tuple[int, int]] = []
    product = Fraction(1)
    while True:
        best = None
        for i, row in rows.items():
            ri = len(row) - 1
            for j, e in row.items():
                if e.is_constant():
                    cost = ri * (len(colmap[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pr, pc = best
        prow = rows.pop(pr)
        cst = prow[pc].constant_term()
        product *= cst
        pivots.append((pr, pc))
        for j in prow:
            colmap[j].discard(pr)
        for i in list(colmap.pop(pc)):
            row = rows[i]
            f = row.pop(pc).scale(1 / cst)
            for j, e in prow.items():
                if j == pc:
                    continue
                new = row.get(j, None)
                new = -(f * e) if new is None else new - f * e
                if new:
                    if j not in row:
                        colmap[j].add(i)
                    row[j] = new
                elif j in row:
                    del row[j]
                    colmap[j].discard(i)
    return pivots, product, rows


def _complexity(e: MultiPoly) -> tuple[int, int]:
    return (e.degree(), len(e))


def _bareiss(a: PolyMatrix, nvars: int):
    """Fraction-free elimination with full pivoting on a dense block.

    Returns (rank, row order, col order, last pivot, swap parity).
    The leading rank x rank minor in the returned orders equals the last
    pivot; the parity tracks the swaps relative to the input order.
    """
    a = [list(r) for r in a]
    nr, nc = shape(a)
    row_ord = list(range(nr))
    col_ord = list(range(nc))
    prev = MultiPoly.constant(nvars, 1)
    sign = 1
    k = 0
    while k < min(nr, nc):
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                e = a[i][j]
                if e:
                    key = _complexity(e)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            row_ord[k], row_ord[pi] = row_ord[pi], row_ord[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            col_ord[k], col_ord[pj] = col_ord[pj], col_ord[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, nr):
            aik = a[i][k]
            for j in range(k + 1, nc):
                num = piv * a[i][j]
                if aik:
                    num = num - aik * a[k][j]
                a[i][j] = num.exact_div(prev)
            a[i][k] = MultiPoly.zero(nvars)
        prev = piv
        k += 1
    return k, row_ord, col_ord, prev, sign


def eliminate_poly(m: PolyMatrix) -> Elimination:
    """Rank profile of a polynomial matrix over its fraction field.

    Constant pivots are used first (plain Gaussian steps); the remaining
    block goes through Bareiss elimination with exact polynomial division.
    """
    nvars = poly_nvars(m)
    nr, nc = shape(m)
    pivots, product, rest = _unit_phase(m, nvars)
    used_cols = {c for _, c in pivots}
    rest_rows = sorted(rest)
    rest_cols = [c for c in range(nc) if c not in used_cols]
    block = [[rest[i].get(j, MultiPoly.zero(nvars)) for j in rest_cols] for i in rest_rows]
    if block and rest_cols:
        k, ro, co, last, _ = _bareiss(block, nvars)
    else:
        k, ro, co, last = 0, [], [], MultiPoly.constant(nvars, 1)
    prow = [r for r, _ in pivots] + [rest_rows[i] for i in ro[:k]]
    pcol = [c for _, c in pivots] + [rest_cols[j] for j in co[:k]]
    # det(M[prow, pcol]) = (unit pivots) * det(Schur block[ro, co])
    minor = last.scale(product)
    return Elimination(len(prow), prow, pcol, minor)


def det_poly(m: PolyMatrix) -> MultiPoly:
    """Exact determinant of a square polynomial matrix."""
    n, c = shape(m)
    if n != c:
        raise ValueError("determinant of a non-square matrix")
    nvars = poly_nvars(m)
    if n == 0:
        return MultiPoly.constant(nvars, 1)
    el = eliminate_poly(m)
    if el.rank < n:
        return MultiPoly.zero(nvars)
    return el.minor_det.scale(_perm_sign(el.pivot_rows) * _perm_sign(el.pivot_cols))


def submatrix(m, rows: Sequence[int], cols: Sequence[int]):
    return [[m[i][j] for j in cols] for i in rows]


def _evaluate_mod_p(m: PolyMatrix, point: Sequence[int]) -> list[list[int]]:
    out = []
    for row in m:
        new = []
        for e in row:
            if not e:
                new.append(0)
                continue
            exps = [list(mono) for mono, _ in e.items()]
            coefs = [kernels.residue(c) for _, c in e.items()]
            new.append(int(kernels.poly_eval_mod_p(exps, coefs, [list(point)])[0]))
        out.append(new)
    return out


def rank_poly_randomized(m: PolyMatrix, trials: int = 5, seed: int = 0) -> Elimination:
    """Rank by modular evaluation at random points, certified from below.

    The candidate minor found at the best point is expanded symbolically; a
    nonzero determinant certifies ``rank >= k``.  The upper bound is
    probabilistic (Schwartz-Zippel over Z/p).
    """
    nvars = poly_nvars(m)
    nr, nc = shape(m)
    rng = random.Random(seed)
    best = (-1, [], [])
    for _ in range(trials):
        point = [rng.randrange(1, kernels.PRIME) for _ in range(nvars)]
        r, rows, cols = kernels.row_echelon_mod_p(_evaluate_mod_p(m, point))
        if r > best[0]:
            best = (r, rows, cols)
    k, rows, cols = best
    minor = det_poly(submatrix(m, rows, cols)) if k else MultiPoly.constant(nvars, 1)
    if k and minor.is_zero():
        log.warning("randomized certificate minor vanished; falling back to exact elimination")
        return eliminate_poly(m)
    max_degree = max((e.degree() for row in m for e in row), default=0)
    log.info("randomized rank %d: per-trial miss probability <= %d/%d",
             k, max(max_degree, 0) * min(nr, nc), kernels.PRIME)
    return Elimination(k, rows, cols, minor)


def rank_poly(m: PolyMatrix, method: str = "auto", seed: int = 0) -> int:
    """Rank of a polynomial matrix over the rational function field."""
    return rank_profile_poly(m, method, seed).rank


def rank_profile_poly(m: PolyMatrix, method: str = "auto", seed: int = 0) -> Elimination:
    if not m or not m[0]:
        return Elimination(0, [], [], MultiPoly.constant(poly_nvars(m) if m else 0, 1))
    if method == "auto":
        method = "bareiss" if min(shape(m)) <= BAREISS_LIMIT else "randomized"
    if method == "bareiss":
        return eliminate_poly(m)
    if method == "randomized":
        return rank_poly_randomized(m, seed=seed)
    raise ValueError(f"unknown rank method {method!r}")


def cramer_kernel(m: PolyMatrix, rows: Sequence[int], cols: Sequence[int]) -> list[list[MultiPoly]]:
    """Polynomial kernel vectors built from a nonzero maximal minor.

    For every column ``j`` outside ``cols`` returns ``v`` with ``v[j] = det J``
    and ``v[cols[t]] = -det(J with column t replaced by m[rows, j])``.
    When the minor is maximal these span the kernel over the fraction field.
    """
    nvars = poly_nvars(m)
    nc = shape(m)[1]
    J = submatrix(m, rows, cols)
    dJ = det_poly(J)
    out = []
    for j in range(nc):
        if j in cols:
            continue
        v = [MultiPoly.zero(nvars)] * nc
        v[j] = dJ
        rhs = [m[i][j] for i in rows]
        for t, c in enumerate(cols):
            Jt = [row[:t] + [rhs[i]] + row[t + 1:] for i, row in enumerate(J)]
            v[c] = -det_poly(Jt)
        out.append(v)
    return out


def poly_matvec(m: PolyMatrix, v: Sequence[MultiPoly]) -> list[MultiPoly]:
    nvars = poly_nvars(m)
    out = []
    for row in m:
        acc = MultiPoly.zero(nvars)
        for e, x in zip(row, v):
            if e and x:
                acc = acc + e * x
        out.append(acc)
    return out


# -- serialization ---------------------------------------------------------


def matrix_to_json(m: Sequence[Sequence]) -> dict:
    r, c = shape(m)
    return {"rows": r, "cols": c,
            "entries": [[format_rational(x) for x in row] for row in m]}


def matrix_from_json(data) -> Matrix:
    if isinstance(data, list):
        return as_matrix(data)
    entries = data["entries"]
    m = as_matrix(entries)
    if (len(m), len(m[0]) if m else 0) != (data.get("rows", len(m)), data.get("cols", len(m[0]) if m else 0)):
        raise ValueError("rows/cols do not match entries")
    return m


def poly_matrix_to_json(m: PolyMatrix) -> dict:
    r, c = shape(m)
    return {"rows": r, "cols": c, "nvars": poly_nvars(m),
            "entries": [[e.to_json() for e in row] for row in m]}


def poly_matrix_from_json(data) -> PolyMatrix:
    nvars = data.get("nvars")
    m = [[MultiPoly.from_json(e, nvars) for e in row] for row in data["entries"]]
    poly_nvars(m)
    return m
