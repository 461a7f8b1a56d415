"""Multiplicative structure of tuples of nonzero rationals.

A rational is determined by its sign and its prime-exponent vector, so
multiplicative relations are integer kernels: one equation per prime plus
a parity equation for the sign.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from sympy import factorint

from .core import MultiPoly, monomials_below, to_fraction
from .intlattice import canonical_basis, integer_kernel, lattice_rank
from .linalg import kernel_Q


class HypothesisError(ValueError):
    """The polynomial does not vanish where the Vandermonde criterion needs it to."""


@lru_cache(maxsize=4096)
def _factor_int(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


def factor_rational(q) -> tuple[int, dict[int, int]]:
    """``(sign bit, {prime: exponent})`` of a nonzero rational."""
    q = to_fraction(q)
    if q == 0:
        raise ValueError("zero has no multiplicative factorization")
    exps: dict[int, int] = {}
    for p, e in _factor_int(abs(q.numerator)):
        exps[p] = e
    for p, e in _factor_int(q.denominator):
        exps[p] = exps.get(p, 0) - e
    return (1 if q < 0 else 0), exps


def power_product(values: Sequence, exponents: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for v, e in zip(values, exponents):
        if e:
            out *= to_fraction(v) ** e
    return out


@dataclass(frozen=True)
class RelationLattice:
    """Basis (Hermite normal form rows) of all integer relations."""

    size: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def columns(self) -> list[list[int]]:
        """The basis as an n x rank integer matrix."""
        return [[v[i] for v in self.basis] for i in range(self.size)]


def _relation_kernel(elements: Sequence[Sequence[Fraction]]) -> list[tuple[int, ...]]:
    """Integer lambdas with ``prod_i e_i^lambda_i = 1`` componentwise."""
    m = len(elements)
    if m == 0:
        return []
    ncomp = len(elements[0])
    rows: list[list[int]] = []
    sign_rows: list[list[int]] = []
    for j in range(ncomp):
        facts = [factor_rational(e[j]) for e in elements]
        primes = sorted({p for _, f in facts for p in f})
        for p in primes:
            rows.append([f.get(p, 0) for _, f in facts])
        signs = [s for s, _ in facts]
        if any(signs):
            sign_rows.append(signs)
    k = len(sign_rows)
    # sign rows get a private slack: sum s_i*lambda_i + 2*slack = 0
    full = [r + [0] * k for r in rows]
    for t, s in enumerate(sign_rows):
        full.append(s + [2 if u == t else 0 for u in range(k)])
    if not full:
        return [tuple(int(i == j) for i in range(m)) for j in range(m)]
    ker = integer_kernel(full)
    return canonical_basis([v[:m] for v in ker])


def relation_lattice(values: Sequence) -> RelationLattice:
    """All ``lambda in Z^n`` with ``prod alpha_i^lambda_i = 1``."""
    vals = [to_fraction(v) for v in values]
    if any(v == 0 for v in vals):
        raise ValueError("tuple entries must be nonzero")
    basis = _relation_kernel([(v,) for v in vals])
    return RelationLattice(len(vals), tuple(basis))


def row_relation_lattice(g: Sequence[Sequence]) -> RelationLattice:
    """Relations among the rows of a generator matrix, componentwise."""
    rows = [[to_fraction(x) for x in row] for row in g]
    return RelationLattice(len(rows), tuple(_relation_kernel(rows)))


def verify_relation_lattice(values: Sequence, basis: Sequence[Sequence[int]]) -> bool:
    """Each basis vector is a relation and the lattice has the full rank.

    Rank is compared with ``n - rank(exponent matrix)``; the sign character
    only changes the index, which is checked through saturation parity.
    """
    vals = [to_fraction(v) for v in values]
    n = len(vals)
    if any(len(v) != n for v in basis):
        return False
    if any(power_product(vals, v) != 1 for v in basis):
        return False
    facts = [factor_rational(v) for v in vals]
    primes = sorted({p for _, f in facts for p in f})
    exps = [[f.get(p, 0) for _, f in facts] for p in primes]
    saturated = integer_kernel(exps, n) if exps else [tuple(int(i == j) for i in range(n)) for j in range(n)]
    if lattice_rank(basis) != len(saturated):
        return False
    # the relation lattice is the kernel of the sign character on the saturation
    signs = [s for s, _ in facts]
    odd = [v for v in saturated if sum(s * x for s, x in zip(signs, v)) % 2]
    expected = list(saturated) if not odd else (
        [v for v in saturated if v not in odd]
        + [tuple(2 * x for x in odd[0])]
        + [tuple(x - y for x, y in zip(v, odd[0])) for v in odd[1:]])
    return canonical_basis(basis) == canonical_basis(expected)


def vanishes_on_powers(values: Sequence, f: MultiPoly, count: int) -> int | None:
    """First ``z`` in ``1..count`` with ``f(alpha^z) != 0``, or None."""
    vals = [to_fraction(v) for v in values]
    for z in range(1, count + 1):
        if f.evaluate([v ** z for v in vals]) != 0:
            return z
    return None


def vandermonde_relation(values: Sequence, f: MultiPoly, l_bound: int,
                         max_points: int = 10 ** 6) -> tuple[int, ...]:
    """A nonzero relation extracted from a vanishing polynomial.

    After checking ``f(alpha^z) = 0`` for ``z = 1..(L+1)^n``, searches the
    exponent box ``{0..L}^n`` for two tuples with equal power products and
    returns their difference.
    """
    vals = [to_fraction(v) for v in values]
    n = len(vals)
    if any(v == 0 for v in vals):
        raise ValueError("tuple entries must be nonzero")
    if f.nvars != n:
        raise ValueError(f"polynomial has {f.nvars} variables, tuple has {n} entries")
    if f.is_zero():
        raise HypothesisError("f must be nonzero")
    if any(f.degree_in(i) > l_bound for i in range(n)):
        raise HypothesisError(f"f has degree above {l_bound} in some variable")
    count = (l_bound + 1) ** n
    if count > max_points:
        raise ValueError(f"(L+1)^n = {count} exceeds the point cap {max_points}")
    bad = vanishes_on_powers(vals, f, count)
    if bad is not None:
        raise HypothesisError(f"f(alpha^z) != 0 at z = {bad}")
    facts = [factor_rational(v) for v in vals]
    primes = sorted({p for _, fa in facts for p in fa})
    seen: dict[tuple, tuple[int, ...]] = {}
    for lam in itertools.product(range(l_bound + 1), repeat=n):
        key = (sum(s * e for (s, _), e in zip(facts, lam)) % 2,) + tuple(
            sum(fa.get(p, 0) * e for (_, fa), e in zip(facts, lam)) for p in primes)
        prev = seen.get(key)
        if prev is not None:
            rel = tuple(a - b for a, b in zip(lam, prev))
            if power_product(vals, rel) != 1:
                raise RuntimeError("collision does not verify")
            return rel if next(x for x in rel if x) > 0 else tuple(-x for x in rel)
        seen[key] = lam
    raise RuntimeError("internal contradiction: f vanishes but no exponent collision exists")


@dataclass(frozen=True)
class XnResult:
    points: tuple[tuple[Fraction, ...], ...]
    exponents: tuple[tuple[int, ...], ...]  # first exponent tuple reaching each point

    @property
    def size(self) -> int:
        return len(self.points)


def enumerate_xn(g: Sequence[Sequence], n_bound: int) -> XnResult:
    """Distinct componentwise products ``prod_i x_i^{a_i}``, ``0 <= a_i <= N``."""
    if n_bound < 0:
        raise ValueError("N must be nonnegative")
    rows = [[to_fraction(x) for x in row] for row in g]
    if any(x == 0 for row in rows for x in row):
        raise ValueError("generator entries must be nonzero")
    m = len(rows)
    n = len(rows[0]) if rows else 0
    seen: dict[tuple, tuple[int, ...]] = {}
    for a in itertools.product(range(n_bound + 1), repeat=m):
        pt = tuple(power_product([rows[i][j] for i in range(m)], a) for j in range(n))
        seen.setdefault(pt, a)
    return XnResult(tuple(seen), tuple(seen.values()))


def vanishing_poly(points: Sequence[Sequence], degree_bound: int) -> MultiPoly | None:
    """Nonzero integer polynomial of total degree < d vanishing on all points.

    The first kernel vector of the evaluation matrix (points x monomials,
    ascending graded order) is returned with content 1; None if the kernel
    is trivial.
    """
    if degree_bound < 1:
        raise ValueError("degree bound must be at least 1")
    pts = [[to_fraction(x) for x in p] for p in points]
    if not pts:
        raise ValueError("at least one point is required")
    n = len(pts[0])
    monos = monomials_below(n, degree_bound)
    rows = [[math.prod((x ** e for x, e in zip(p, mono)), start=Fraction(1)) for mono in monos]
            for p in pts]
    ker = kernel_Q(rows, len(monos))
    if not ker:
        return None
    return MultiPoly(n, {mono: c for mono, c in zip(monos, ker[0]) if c})


def pairing(g: Sequence[Sequence], a: Sequence[int], b: Sequence[int]) -> Fraction:
    """``prod_{i,j} x_ij^(a_i b_j)``."""
    rows = [[to_fraction(x) for x in row] for row in g]
    if len(a) != len(rows) or any(len(row) != len(b) for row in rows):
        raise ValueError("exponent vectors do not match the generator shape")
    out = Fraction(1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            e = ai * bj
            if e:
                out *= rows[i][j] ** e
    return out


@dataclass(frozen=True)
class PairingReport:
    trivial: bool
    rank_a: int
    rank_b: int
    threshold_met: bool


def subgroup_pairing_trivial(g: Sequence[Sequence], a_basis: Sequence[Sequence[int]],
                             b_basis: Sequence[Sequence[int]]) -> PairingReport:
    """Whether ``<A, B> = 1`` on generators, and whether ``m'/m + n'/n > 1``."""
    m = len(g)
    n = len(g[0]) if m else 0
    trivial = all(pairing(g, a, b) == 1 for a in a_basis for b in b_basis)
    ra = lattice_rank(a_basis) if a_basis else 0
    rb = lattice_rank(b_basis) if b_basis else 0
    if ra != len(a_basis) or rb != len(b_basis):
        raise ValueError("subgroup generators must be independent")
    return PairingReport(trivial, ra, rb, Fraction(ra, m) + Fraction(rb, n) > 1)


def theta(r: int, d: int) -> int:
    """Least total norm of d distinct tuples in (Z>=0)^r, by filling degree shells."""
    if r < 1 or d < 1:
        raise ValueError("r and d must be positive")
    total, left, k = 0, d, 0
    while left:
        take = min(left, math.comb(k + r - 1, r - 1))
        total += take * k
        left -= take
        k += 1
    return total


def theta_by_enumeration(r: int, d: int) -> int:
    """Same minimum from explicit tuples of norm < d (slow; for checking)."""
    norms = sorted(sum(t) for t in itertools.product(range(d), repeat=r) if sum(t) < d)
    return sum(norms[:d])


def laurent_lower_bound(r: int, d: int) -> float:
    return r / (6 * math.e) * d ** ((r + 1) / r)


def laurent_threshold(r: int, d_max: int) -> int | None:
    """Least D with ``theta(r, d) > laurent_lower_bound(r, d)`` for all D <= d <= d_max."""
    threshold = None
    for d in range(d_max, 0, -1):
        if theta(r, d) > laurent_lower_bound(r, d):
            threshold = d
        else:
            break
    return threshold
