"""Determinantal representations of polynomials by affine matrices.

The construction is the classical recursion: factor a degree-d matrix as
``A @ B`` with ``B = x (x) I`` (x = (x_1, ..., x_n, 1)), then trade the
product for the square block matrix ``[[I, B], [-A, 0]]`` which has the
same determinant and entries of degree at most d - 1.
"""

from __future__ import annotations

import logging
import random
from fractions import Fraction
from typing import Sequence

from . import kernels
from .core import MultiPoly
from .linalg import PolyMatrix, det_poly, poly_nvars, shape

log = logging.getLogger(__name__)


def _split_linear(p: MultiPoly) -> list[MultiPoly]:
    """``[c_1, ..., c_n, c_{n+1}]`` with ``p = sum_l c_l x_l + c_{n+1}``.

    Each non-constant monomial goes to its first occurring variable, so
    ``deg c_l <= deg p - 1`` and the constant ``c_{n+1}`` is the constant term.
    """
    n = p.nvars
    parts: list[dict] = [{} for _ in range(n + 1)]
    for mono, c in p.items():
        lead = next((i for i, e in enumerate(mono) if e), None)
        if lead is None:
            parts[n][mono] = c
        else:
            parts[lead][mono[:lead] + (mono[lead] - 1,) + mono[lead + 1:]] = c
    return [MultiPoly._raw(n, t) for t in parts]


def factor_ab(n_mat: PolyMatrix, d: int) -> tuple[PolyMatrix, PolyMatrix]:
    """Write a square matrix of degree <= d as ``A @ B``.

    ``A`` is m x m(n+1) with entries of degree <= d-1; ``B = x (x) I_m`` is
    m(n+1) x m with row ``l*m + j`` equal to ``x_l`` times the j-th unit row.
    """
    m, c = shape(n_mat)
    if m != c:
        raise ValueError("factor_ab needs a square matrix")
    if d < 1:
        raise ValueError("degree bound must be at least 1")
    nvars = poly_nvars(n_mat)
    worst = max((e.degree() for row in n_mat for e in row), default=-1)
    if worst > d:
        raise ValueError(f"entry of degree {worst} exceeds the bound {d}")
    s = m * (nvars + 1)
    zero = MultiPoly.zero(nvars)
    A = [[zero] * s for _ in range(m)]
    for i in range(m):
        for j in range(m):
            for l, part in enumerate(_split_linear(n_mat[i][j])):
                A[i][l * m + j] = part
    xs = [MultiPoly.variable(nvars, l) for l in range(nvars)] + [MultiPoly.constant(nvars, 1)]
    B = [[xs[l] if j == jj else zero for jj in range(m)] for l in range(nvars + 1) for j in range(m)]
    return A, B


def embed_square(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """``[[I_s, B], [-A, 0]]``, whose determinant equals ``det(A @ B)``."""
    m, s = shape(a)
    sb, mb = shape(b)
    if (sb, mb) != (s, m):
        raise ValueError(f"shape mismatch: A is {m}x{s}, B is {sb}x{mb}")
    nvars = poly_nvars(a + b) if (a or b) else 0
    zero = MultiPoly.zero(nvars)
    one = MultiPoly.constant(nvars, 1)
    top = [[one if i == j else zero for j in range(s)] + list(b[i]) for i in range(s)]
    bottom = [[-e for e in a[i]] + [zero] * m for i in range(m)]
    return top + bottom


def determinantal_rep(p: MultiPoly, prune: bool = False) -> PolyMatrix:
    """Square matrix with affine entries and determinant ``p``.

    Without pruning the dimension is ``(n+2)^(deg p - 1)`` for deg p >= 1.
    ``prune=True`` drops rows and columns that carry a lone constant entry.
    """
    d = p.degree()
    mat = [[p]]
    for level in range(d, 1, -1):
        mat = embed_square(*factor_ab(mat, level))
    return prune_units(mat) if prune else mat


def prune_units(mat: PolyMatrix) -> PolyMatrix:
    """Expand along rows/columns whose only nonzero entry is a constant.

    The removed cofactor (constant times sign) is folded into one remaining
    row, so the determinant is unchanged and entries stay affine.
    """
    mat = [list(r) for r in mat]
    factor = Fraction(1)
    while len(mat) > 1:
        hit = None
        for i, row in enumerate(mat):
            nz = [j for j, e in enumerate(row) if e]
            if len(nz) == 1 and row[nz[0]].is_constant():
                hit = (i, nz[0])
                break
        if hit is None:
            for j in range(len(mat)):
                nz = [i for i in range(len(mat)) if mat[i][j]]
                if len(nz) == 1 and mat[nz[0]][j].is_constant():
                    hit = (nz[0], j)
                    break
        if hit is None:
            break
        i, j = hit
        factor *= mat[i][j].constant_term() * (-1) ** (i + j)
        mat = [row[:j] + row[j + 1:] for k, row in enumerate(mat) if k != i]
    mat[0] = [e.scale(factor) for e in mat[0]]
    return mat


def homogenize_affine(mat: PolyMatrix) -> PolyMatrix:
    """Entrywise homogenization of an affine matrix: constants pick up ``x0``."""
    out = []
    for row in mat:
        new = []
        for e in row:
            if e.degree() > 1:
                raise ValueError("entry is not affine")
            h = MultiPoly._raw(e.nvars + 1, {(1 - sum(m),) + m: c for m, c in e.items()})
            new.append(h)
        out.append(new)
    return out


def is_affine(mat: PolyMatrix) -> bool:
    r, c = shape(mat)
    return r == c and all(e.degree() <= 1 for row in mat for e in row)


def verify_rep(n_mat: PolyMatrix, p: MultiPoly, mode: str = "symbolic", trials: int = 8,
               seed: int = 0) -> bool:
    """Check ``det(n_mat) == p``.

    ``symbolic`` expands the determinant exactly.  ``randomized`` compares
    values modulo a 31-bit prime at ``trials`` uniform points; a wrong
    matrix survives one trial with probability at most ``max(dim, deg p)/prime``.
    """
    r, c = shape(n_mat)
    if r != c or r == 0:
        return False
    if poly_nvars(n_mat) != p.nvars:
        return False
    if mode == "symbolic":
        return det_poly(n_mat) == p
    if mode != "randomized":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    prime = kernels.PRIME
    bound = max(r, p.degree(), 1)
    log.info("randomized det check: %d trials, miss probability <= (%d/%d)^%d",
             trials, bound, prime, trials)
    p_exps = [list(m) for m, _ in p.items()]
    p_coefs = [kernels.residue(cf) for _, cf in p.items()]
    for _ in range(trials):
        point = [rng.randrange(prime) for _ in range(p.nvars)]
        vals = []
        for row in n_mat:
            new = []
            for e in row:
                if e:
                    ex = [list(m) for m, _ in e.items()]
                    co = [kernels.residue(cf) for _, cf in e.items()]
                    new.append(int(kernels.poly_eval_mod_p(ex, co, [point])[0]))
                else:
                    new.append(0)
            vals.append(new)
        lhs = kernels.det_mod_p(vals)
        rhs = int(kernels.poly_eval_mod_p(p_exps, p_coefs, [point])[0]) if p_coefs else 0
        if lhs != rhs:
            return False
    return True


def rep_dimension(nvars: int, degree: int) -> int:
    return (nvars + 2) ** (degree - 1) if degree >= 1 else 1


def matrix_product(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    nvars = poly_nvars(a + b)
    out = []
    for row in a:
        new = []
        for j in range(len(b[0])):
            acc = MultiPoly.zero(nvars)
            for k, e in enumerate(row):
                if e and b[k][j]:
                    acc = acc + e * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def constant_matrix(rows: Sequence[Sequence], nvars: int = 0) -> PolyMatrix:
    return [[MultiPoly.constant(nvars, x) for x in row] for row in rows]
