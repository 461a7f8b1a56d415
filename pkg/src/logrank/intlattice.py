"""Integer lattices: Hermite and Smith normal forms, integer kernels,
basis reduction, Siegel small-kernel vectors and box-image counts.

Integer matrices are lists of rows of Python ints.  Lattice bases are
returned as lists of vectors (the columns of a basis matrix).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

log = logging.getLogger(__name__)

IntMatrix = list[list[int]]
Vector = tuple[int, ...]


class SiegelPreconditionError(ValueError):
    """The input does not satisfy ``N > 2M`` and ``|a_ij| < H``."""


class SiegelSearchError(RuntimeError):
    """No vector inside the bound was found by the configured strategy."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _ints(m: Sequence[Sequence]) -> IntMatrix:
    out = []
    for row in m:
        new = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integer entry {x}")
                x = x.numerator
            new.append(int(x))
        out.append(new)
    return out


def _eye(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _row_combine(M: IntMatrix, i: int, j: int, s: int, t: int, u: int, v: int) -> None:
    # (row_i, row_j) <- (s*row_i + t*row_j, u*row_i + v*row_j)
    ri, rj = M[i], M[j]
    M[i] = [s * x + t * y for x, y in zip(ri, rj)]
    M[j] = [u * x + v * y for x, y in zip(ri, rj)]


def _col_combine(M: IntMatrix, i: int, j: int, s: int, t: int, u: int, v: int) -> None:
    for row in M:
        x, y = row[i], row[j]
        row[i] = s * x + t * y
        row[j] = u * x + v * y


def hnf(a: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form ``H = U @ a`` with unimodular ``U``.

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``.
    """
    H = _ints(a)
    m = len(H)
    n = len(H[0]) if m else 0
    U = _eye(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][c]
            if b == 0:
                continue
            a0 = H[r][c]
            g, s, t = xgcd(a0, b)
            u, v = -b // g, a0 // g
            _row_combine(H, r, i, s, t, u, v)
            _row_combine(U, r, i, s, t, u, v)
        p = H[r][c]
        if p == 0:
            continue
        if p < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
            p = -p
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def snf(a: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``D = U @ a @ V`` with unimodular ``U`` and ``V``.

    The diagonal is nonnegative and each entry divides the next.
    """
    D = _ints(a)
    m = len(D)
    n = len(D[0]) if m else 0
    U, V = _eye(m), _eye(n)
    for t in range(min(m, n)):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        if i0 != t:
            D[t], D[i0] = D[i0], D[t]
            U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            _col_combine(D, t, j0, 0, 1, 1, 0)
            _col_combine(V, t, j0, 0, 1, 1, 0)
        while True:
            for i in range(t + 1, m):
                b = D[i][t]
                if b:
                    a0 = D[t][t]
                    if b % a0 == 0:
                        # plain elimination; an xgcd step here could cycle
                        _row_combine(D, t, i, 1, 0, -b // a0, 1)
                        _row_combine(U, t, i, 1, 0, -b // a0, 1)
                        continue
                    g, s, tt = xgcd(a0, b)
                    _row_combine(D, t, i, s, tt, -b // g, a0 // g)
                    _row_combine(U, t, i, s, tt, -b // g, a0 // g)
            for j in range(t + 1, n):
                b = D[t][j]
                if b:
                    a0 = D[t][t]
                    if b % a0 == 0:
                        _col_combine(D, t, j, 1, 0, -b // a0, 1)
                        _col_combine(V, t, j, 1, 0, -b // a0, 1)
                        continue
                    g, s, tt = xgcd(a0, b)
                    _col_combine(D, t, j, s, tt, -b // g, a0 // g)
                    _col_combine(V, t, j, s, tt, -b // g, a0 // g)
            if any(D[i][t] for i in range(t + 1, m)):
                continue
            p = D[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            # pull the offending row into row t so the next pass takes a gcd
            i = bad[0]
            D[t] = [x + y for x, y in zip(D[t], D[i])]
            U[t] = [x + y for x, y in zip(U[t], U[i])]
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


@dataclass
class NormalForms:
    hermite: IntMatrix
    hermite_transform: IntMatrix
    smith: IntMatrix
    left: IntMatrix
    right: IntMatrix

    @property
    def invariants(self) -> list[int]:
        k = min(len(self.smith), len(self.smith[0]) if self.smith else 0)
        return [self.smith[i][i] for i in range(k)]


def hnf_snf(a: Sequence[Sequence[int]]) -> NormalForms:
    H, W = hnf(a)
    D, U, V = snf(a)
    return NormalForms(H, W, D, U, V)


def det_int(a: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    M = _ints(a)
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if M[i][k]), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x in Z^n : a x = 0}`` in row Hermite normal form."""
    A = _ints(a)
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    AT = [list(col) for col in zip(*A)]
    H, U = hnf(AT)
    ker = [U[i] for i in range(n) if not any(H[i])]
    return canonical_basis(ker)


def canonical_basis(vectors: Sequence[Sequence[int]]) -> list[Vector]:
    """Hermite-normal-form basis of the lattice spanned by ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    H, _ = hnf(vectors)
    return [tuple(r) for r in H if any(r)]


def lattice_equal(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return canonical_basis(a) == canonical_basis(b)


def lattice_contains(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    if not any(v):
        return True
    return canonical_basis(list(basis) + [list(v)]) == canonical_basis(basis)


def lattice_rank(vectors: Sequence[Sequence[int]]) -> int:
    return len(canonical_basis(vectors))


def _dot(u, v) -> int:
    return sum(x * y for x, y in zip(u, v))


def size_reduce(basis: Sequence[Sequence[int]]) -> list[Vector]:
    """Pairwise size-reduction sweeps until no vector gets shorter.

    Each move replaces ``b_j`` by ``b_j - q*b_i`` with ``q`` the rounded
    projection coefficient, only when the squared norm strictly drops, so
    the lattice is unchanged and no norm ever increases.
    """
    B = [list(v) for v in basis]
    changed = True
    while changed:
        changed = False
        for i in range(len(B)):
            ni = _dot(B[i], B[i])
            if ni == 0:
                continue
            for j in range(len(B)):
                if i == j:
                    continue
                q = round(Fraction(_dot(B[i], B[j]), ni))
                if q == 0:
                    continue
                cand = [x - q * y for x, y in zip(B[j], B[i])]
                if _dot(cand, cand) < _dot(B[j], B[j]):
                    B[j] = cand
                    changed = True
    return [tuple(v) for v in B]


def lll(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list[Vector]:
    """Exact LLL reduction of independent integer vectors."""
    B = [list(v) for v in basis]
    n = len(B)
    if n == 0:
        return []

    def gram_schmidt():
        bstar: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms: list[Fraction] = []
        for i in range(n):
            v = [Fraction(x) for x in B[i]]
            for j in range(i):
                mu[i][j] = Fraction(_dot(B[i], bstar[j])) / norms[j] if norms[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(sum(x * x for x in v))
        return mu, norms

    mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                B[k] = [x - q * y for x, y in zip(B[k], B[j])]
                for t in range(j + 1):
                    mu[k][t] -= q * (mu[j][t] if t < j else 1)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return [tuple(v) for v in B]


def _max_norm(v) -> int:
    return max((abs(x) for x in v), default=0)


def _normalize_sign(v: Sequence[int]) -> Vector:
    first = next((x for x in v if x), 0)
    return tuple(-x for x in v) if first < 0 else tuple(v)


def check_siegel(a: Sequence[Sequence[int]], h_bound: int) -> None:
    A = _ints(a)
    M = len(A)
    N = len(A[0]) if A else 0
    if M == 0 or N <= 2 * M:
        raise SiegelPreconditionError(f"need N > 2M > 0, got M={M}, N={N}")
    if h_bound < 1:
        raise SiegelPreconditionError("H must be positive")
    worst = max(abs(x) for row in A for x in row)
    if worst >= h_bound:
        raise SiegelPreconditionError(f"entry of size {worst} is not below H={h_bound}")


def siegel_pigeonhole(a: Sequence[Sequence[int]], h_bound: int,
                      max_points: int = 10 ** 6) -> Vector:
    """Box-principle search: first collision of ``A b`` over ``b in {0..NH}^N``.

    Reference oracle for tiny instances; the collision difference has
    coordinates of absolute value at most NH.
    """
    check_siegel(a, h_bound)
    A = _ints(a)
    N = len(A[0])
    box = N * h_bound
    seen: dict[tuple, Vector] = {}
    for count, b in enumerate(itertools.product(range(box + 1), repeat=N)):
        if count >= max_points:
            break
        img = tuple(_dot(row, b) for row in A)
        prev = seen.get(img)
        if prev is not None:
            return _normalize_sign(tuple(x - y for x, y in zip(b, prev)))
        seen[img] = b
    raise SiegelSearchError(f"no collision among the first {max_points} box points")


def siegel_solve(a: Sequence[Sequence[int]], h_bound: int, strategy: str = "kernel",
                 max_points: int = 10 ** 6) -> Vector:
    """Nonzero ``b`` with ``a b = 0`` and ``max|b_i| < 2 N H``.

    ``strategy="kernel"``: exact integer kernel, LLL and pairwise size
    reduction, then a search over small combinations of the reduced basis.
    ``strategy="pigeonhole"``: the box-principle enumeration, which is also
    the fallback when the reduced kernel yields nothing short enough.
    """
    check_siegel(a, h_bound)
    if strategy == "pigeonhole":
        return siegel_pigeonhole(a, h_bound, max_points)
    if strategy != "kernel":
        raise ValueError(f"unknown strategy {strategy!r}")
    A = _ints(a)
    N = len(A[0])
    bound = 2 * N * h_bound
    basis = size_reduce(lll(integer_kernel(A)))
    basis.sort(key=lambda v: (_max_norm(v), _dot(v, v)))
    best = None
    head = basis[:4]
    for coeffs in itertools.product((-1, 0, 1), repeat=len(head)):
        if not any(coeffs):
            continue
        v = [sum(c * b[i] for c, b in zip(coeffs, head)) for i in range(N)]
        key = (_max_norm(v), _normalize_sign(v))
        if best is None or key < best:
            best = key
    if best[0] >= bound:
        # widen the search before giving up
        for radius in (2, 3):
            for coeffs in itertools.product(range(-radius, radius + 1), repeat=len(head)):
                if not any(coeffs):
                    continue
                v = [sum(c * b[i] for c, b in zip(coeffs, head)) for i in range(N)]
                key = (_max_norm(v), _normalize_sign(v))
                if key < best:
                    best = key
            if best[0] < bound:
                break
    if best[0] >= bound:
        log.info("reduced kernel gave height %d >= %d; trying the box search", best[0], bound)
        try:
            return siegel_pigeonhole(a, h_bound, max_points)
        except SiegelSearchError:
            raise SiegelSearchError(
                f"shortest vector found has height {best[0]} >= {bound}; box search capped") from None
    return best[1]


def verify_siegel(a: Sequence[Sequence[int]], h_bound: int, b: Sequence[int]) -> bool:
    A = _ints(a)
    N = len(A[0]) if A else 0
    return (len(b) == N and any(b) and all(_dot(row, b) == 0 for row in A)
            and _max_norm(b) < 2 * N * h_bound)


def image_count(h_basis: Sequence[Sequence[int]], m: int, t: int) -> int:
    """Size of the image of ``{0..t}^m`` in ``Z^m / H``.

    ``h_basis`` lists the generators of H (each of length m).  Box points are
    mapped to Smith coordinates: torsion coordinates reduced modulo the
    invariant factors, free coordinates kept as they are.
    """
    gens = [list(v) for v in h_basis]
    if any(len(v) != m for v in gens):
        raise ValueError("generator length does not match m")
    h = len(gens)
    if h:
        cols = [list(r) for r in zip(*gens)]  # m x h
        if lattice_rank(gens) != h:
            raise ValueError("generators are linearly dependent")
        D, U, _ = snf(cols)
        invariants = [D[i][i] for i in range(h)]
    else:
        U, invariants = _eye(m), []
    seen = set()
    for x in itertools.product(range(t + 1), repeat=m):
        y = [_dot(row, x) for row in U]
        key = tuple(y[i] % invariants[i] for i in range(h)) + tuple(y[h:])
        seen.add(key)
    return len(seen)
