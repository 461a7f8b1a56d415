"""p-adic numbers in Q_p with tracked precision, and the p-adic log and exp.

A nonzero :class:`PadicNumber` is ``p^v * u + O(p^prec)`` with ``u`` an
integer unit modulo ``p^(prec - v)``.  Zero at precision ``k`` means "a
value in ``p^k Z_p``": it cannot be told apart from 0.  Every operation
reports only the precision it can justify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import to_fraction
from .intlattice import det_int
from .relations import theta


class PrecisionError(ArithmeticError):
    """Working precision is too small to decide the answer."""


def vp(n, p: int) -> int | None:
    """Valuation of a rational; None for 0."""
    q = to_fraction(n)
    if q == 0:
        return None
    v, a, b = 0, q.numerator, q.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def _split(q: Fraction, p: int) -> tuple[int, int, int]:
    """``q = p^v * a/b`` with a, b coprime to p."""
    v, a, b = 0, q.numerator, q.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v, a, b


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicNumber:
    p: int
    valuation: int | None  # None stands for +infinity (zero at this precision)
    unit: int
    prec: int  # absolute precision

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")
        if self.valuation is None:
            object.__setattr__(self, "unit", 0)
            return
        rel = self.prec - self.valuation
        if rel < 1:
            raise ValueError("absolute precision must exceed the valuation")
        u = self.unit % self.p ** rel
        if u % self.p == 0:
            raise ValueError("unit part must be coprime to p")
        object.__setattr__(self, "unit", u)

    # construction

    @classmethod
    def zero(cls, p: int, prec: int) -> PadicNumber:
        return cls(p, None, 0, prec)

    @classmethod
    def from_rational(cls, q, p: int, prec: int) -> PadicNumber:
        """``q`` with ``prec`` digits of relative precision (absolute for 0)."""
        q = to_fraction(q)
        if q == 0:
            return cls.zero(p, prec)
        v, a, b = _split(q, p)
        mod = p ** prec
        return cls(p, v, a * pow(b, -1, mod) % mod, v + prec)

    @classmethod
    def from_int_mod(cls, n: int, p: int, prec: int) -> PadicNumber:
        """The class of the integer ``n`` modulo ``p^prec``."""
        n %= p ** prec
        if n == 0:
            return cls.zero(p, prec)
        v = _vp_int(n, p)
        return cls(p, v, n // p ** v, prec)

    # queries

    @property
    def rel_prec(self) -> int:
        return 0 if self.valuation is None else self.prec - self.valuation

    def is_zero(self) -> bool:
        return self.valuation is None

    def to_fraction(self) -> Fraction:
        """The representative ``p^v * u`` with ``0 <= u < p^rel``."""
        if self.valuation is None:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def residue(self) -> int:
        """Integer representative modulo ``p^prec`` (needs ``v >= 0``)."""
        if self.valuation is None:
            return 0
        if self.valuation < 0:
            raise ValueError("value is not p-integral")
        return self.unit * self.p ** self.valuation

    def truncate(self, prec: int) -> PadicNumber:
        if prec >= self.prec:
            return self
        if self.valuation is None or self.valuation >= prec:
            return PadicNumber.zero(self.p, prec)
        return PadicNumber(self.p, self.valuation, self.unit, prec)

    def digits(self) -> list[int]:
        """Base-p digits from ``p^v`` up to ``p^(prec-1)``."""
        out, u = [], self.unit
        for _ in range(self.rel_prec):
            out.append(u % self.p)
            u //= self.p
        return out

    def __str__(self) -> str:
        p = self.p
        terms = []
        if self.valuation is not None:
            for i, dig in enumerate(self.digits()):
                if not dig:
                    continue
                e = self.valuation + i
                power = "" if e == 0 else (f"{p}" if e == 1 else f"{p}^{e}")
                if not power:
                    terms.append(str(dig))
                else:
                    terms.append(power if dig == 1 else f"{dig}*{power}")
        terms.append(f"O({p}^{self.prec})")
        return " + ".join(terms)

    def to_json(self) -> dict:
        return {"p": self.p, "valuation": self.valuation, "unit": str(self.unit),
                "precision": self.prec, "digits": str(self)}

    @classmethod
    def from_json(cls, data: dict) -> PadicNumber:
        v = data["valuation"]
        return cls(int(data["p"]), None if v is None else int(v), int(data["unit"]),
                   int(data["precision"]))

    # arithmetic

    def _check(self, other) -> PadicNumber:
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(other, self.p, max(self.rel_prec, 1))
        if other.p != self.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
        return other

    def __neg__(self) -> PadicNumber:
        if self.valuation is None:
            return self
        return PadicNumber(self.p, self.valuation, -self.unit, self.prec)

    def __add__(self, other) -> PadicNumber:
        other = self._check(other)
        p, k = self.p, min(self.prec, other.prec)
        if self.valuation is None:
            return other.truncate(k)
        if other.valuation is None:
            return self.truncate(k)
        lo = min(self.valuation, other.valuation)
        s = self.unit * p ** (self.valuation - lo) + other.unit * p ** (other.valuation - lo)
        if s == 0:
            return PadicNumber.zero(p, k)
        v = lo + _vp_int(s, p)
        if v >= k:
            return PadicNumber.zero(p, k)
        return PadicNumber(p, v, s // p ** (v - lo), k)

    __radd__ = __add__

    def __sub__(self, other) -> PadicNumber:
        return self + (-self._check(other))

    def __rsub__(self, other) -> PadicNumber:
        return self._check(other) - self

    def __mul__(self, other) -> PadicNumber:
        other = self._check(other)
        p = self.p
        if self.valuation is None and other.valuation is None:
            return PadicNumber.zero(p, self.prec + other.prec)
        if self.valuation is None:
            return PadicNumber.zero(p, self.prec + other.valuation)
        if other.valuation is None:
            return PadicNumber.zero(p, other.prec + self.valuation)
        v = self.valuation + other.valuation
        rel = min(self.rel_prec, other.rel_prec)
        return PadicNumber(p, v, self.unit * other.unit, v + rel)

    __rmul__ = __mul__

    def inverse(self) -> PadicNumber:
        if self.valuation is None:
            raise ZeroDivisionError("division by a value indistinguishable from 0")
        rel = self.rel_prec
        return PadicNumber(self.p, -self.valuation, pow(self.unit, -1, self.p ** rel),
                           rel - self.valuation)

    def __truediv__(self, other) -> PadicNumber:
        other = self._check(other)
        if other.valuation is None:
            raise ZeroDivisionError("division by a value indistinguishable from 0")
        if self.valuation is None:
            return PadicNumber.zero(self.p, self.prec - other.valuation)
        return self * other.inverse()

    def __rtruediv__(self, other) -> PadicNumber:
        return self._check(other) / self

    def __pow__(self, e: int) -> PadicNumber:
        if e < 0:
            return self.inverse() ** (-e)
        out = PadicNumber.from_rational(1, self.p, max(self.rel_prec, 1))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out


def padic_arith(a: PadicNumber, b: PadicNumber, op: str) -> PadicNumber:
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](b)


def guard_digits(terms: int, p: int) -> int:
    return math.ceil(math.log(max(terms, 1), p)) + 2 if terms > 1 else 2


def _log_one_unit(w: int, s: int, p: int, k: int) -> int:
    """``log(1 + p^s w)`` modulo ``p^k`` for an integer w, s >= 1 (s >= 2 if p = 2)."""
    # last n whose term can still matter: n*s - floor(log_p n) < k
    last, n = 0, 1
    while n * s - (len(_digits(n, p)) - 1) < k:
        last = n
        n += 1
    mod = p ** (k + guard_digits(last, p))
    total, wn = 0, 1
    for n in range(1, last + 1):
        wn = wn * w % mod
        e = _vp_int(n, p)
        # y^n / n = p^(ns - e) * w^n / (n / p^e), exact since ns > e
        term = p ** (n * s - e) * wn * pow(n // p ** e, -1, mod)
        total += term if n % 2 else -term
    return total % p ** k


def _digits(n: int, p: int) -> list[int]:
    out = []
    while n:
        out.append(n % p)
        n //= p
    return out or [0]


def _log_unit(u: int, p: int, k: int) -> int:
    """``log_p`` of the unit class ``u mod p^k``, modulo ``p^k``."""
    mod = p ** k
    if p == 2:
        if u % 4 == 1:
            y = (u - 1) % mod
        else:
            # u^2 is 1 mod 8 and known mod 2^(k+1); halve at the end
            sq = u * u % (2 * mod)
            y2 = sq - 1
            if y2 == 0:
                return 0
            s = _vp_int(y2, 2)
            if s >= k + 1:
                return 0
            return (_log_one_unit(y2 >> s, s, 2, k + 1) // 2) % mod
        if y == 0:
            return 0
        s = _vp_int(y, 2)
        return _log_one_unit(y >> s, s, 2, k) if s < k else 0
    # odd p: log u = log(u^(p-1)) / (p-1), and u^(p-1) is a 1-unit
    w = pow(u, p - 1, mod) - 1
    if w == 0:
        return 0
    s = _vp_int(w, p)
    if s >= k:
        return 0
    return _log_one_unit(w // p ** s, s, p, k) * pow(p - 1, -1, mod) % mod


def log_p(x: PadicNumber) -> PadicNumber:
    """Iwasawa logarithm: ``log_p(p) = 0``, so only the unit part matters.

    The result has absolute precision equal to the relative precision of x.
    """
    if x.valuation is None:
        raise ValueError("log_p is undefined at 0")
    k = x.rel_prec
    return PadicNumber.from_int_mod(_log_unit(x.unit, x.p, k), x.p, k)


def exp_domain_min(p: int) -> int:
    """Least valuation inside the disc ``|x| < p^(-1/(p-1))``."""
    return 2 if p == 2 else 1


def exp_p(x: PadicNumber) -> PadicNumber:
    """``sum x^n / n!`` for ``v(x) >= 1`` (``>= 2`` when p = 2)."""
    p, k = x.p, x.prec
    vmin = exp_domain_min(p)
    if x.valuation is None:
        if k < vmin:
            raise ValueError(f"exp_p needs valuation >= {vmin}; zero is only known mod {p}^{k}")
        return PadicNumber(p, 0, 1, k)
    v = x.valuation
    if v < vmin:
        raise ValueError(f"exp_p needs valuation >= {vmin}, got {v}")
    # v_p(n!) <= (n-1)/(p-1), so terms with n*v - (n-1)/(p-1) >= k vanish mod p^k
    last, n = 0, 1
    while Fraction(n * v) - Fraction(n - 1, p - 1) < k:
        last = n
        n += 1
    mod = p ** (k + guard_digits(last, p))
    total, un, fact = 1, 1, 1
    for n in range(1, last + 1):
        un = un * x.unit % mod
        fact *= n
        e = _vp_int(fact, p)
        term = p ** (n * v - e) * un * pow(fact // p ** e, -1, mod)
        total += term
    return PadicNumber(p, 0, total % p ** k, k)


def teichmuller(a: int, p: int, k: int) -> PadicNumber:
    """The root of unity congruent to ``a`` mod p (mod 4 when p = 2)."""
    mod = p ** k
    if p == 2:
        if a % 2 == 0:
            raise ValueError("Teichmuller lift needs a unit")
        return PadicNumber(2, 0, 1 if a % 4 == 1 else -1, k)
    if a % p == 0:
        raise ValueError("Teichmuller lift needs a unit")
    t = a % mod
    for _ in range(k):
        t = pow(t, p, mod)
    return PadicNumber(p, 0, t, k)


def _poly_eval(coeffs: Sequence[int], x: int, mod: int | None = None) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
        if mod:
            acc %= mod
    return acc


def _poly_deriv(coeffs: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_root(coeffs: Sequence[int], r0: int, p: int, k: int) -> PadicNumber:
    """Root of ``sum c_i x^i`` in Z_p lifting ``r0``, to absolute precision k."""
    coeffs = [int(c) for c in coeffs]
    if k < 1:
        raise ValueError("precision must be positive")
    if _poly_eval(coeffs, r0) % p:
        raise ValueError(f"f(r0) is not 0 mod {p}")
    df = _poly_deriv(coeffs)
    if _poly_eval(df, r0) % p == 0:
        raise ValueError(f"f'(r0) is 0 mod {p}; Hensel lifting does not apply")
    x, prec = r0 % p, 1
    while prec < k:
        prec = min(2 * prec, k)
        mod = p ** prec
        x = (x - _poly_eval(coeffs, x, mod) * pow(_poly_eval(df, x, mod), -1, mod)) % mod
    if _poly_eval(coeffs, x, p ** k) != 0:
        raise RuntimeError("Hensel iteration did not converge")
    return PadicNumber.from_int_mod(x, p, k)


def simple_roots_mod_p(coeffs: Sequence[int], p: int) -> list[int]:
    df = _poly_deriv(coeffs)
    return [r for r in range(p) if _poly_eval(coeffs, r) % p == 0 and _poly_eval(df, r) % p]


def embedding_values(desc, p: int, k: int) -> list[PadicNumber]:
    """Values in Q_p of one unit description.

    A rational gives itself.  ``{"minpoly": [c0..cd], "residue": r0}`` gives
    the Hensel root through r0; without ``residue`` every simple root mod p
    is used, in increasing order of residue.
    """
    if isinstance(desc, dict):
        coeffs = [int(c) for c in desc["minpoly"]]
        if "residue" in desc:
            return [hensel_root(coeffs, int(desc["residue"]), p, k)]
        roots = simple_roots_mod_p(coeffs, p)
        if not roots:
            raise ValueError(f"minimal polynomial has no simple root mod {p}")
        return [hensel_root(coeffs, r, p, k) for r in roots]
    return [PadicNumber.from_rational(desc, p, k)]


@dataclass(frozen=True)
class LogMatrixResult:
    entries: tuple[tuple[PadicNumber, ...], ...]
    rank_lower_bound: int
    precision: int


def padic_rank_lower_bound(mat: Sequence[Sequence[PadicNumber]]) -> int:
    """Pivots that are nonzero at their tracked precision.

    Each such pivot certifies a nonvanishing minor.  An entry that is zero at
    its precision is never used as a pivot, so the count is a lower bound.
    """
    a = [list(row) for row in mat]
    rank = 0
    while a and a[0]:
        best = None
        for i, row in enumerate(a):
            for j, e in enumerate(row):
                if e.valuation is not None and (best is None or e.valuation < a[best[0]][best[1]].valuation):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        piv = a[i][j]
        rest = []
        for r, row in enumerate(a):
            if r == i:
                continue
            f = row[j] / piv
            rest.append([row[c] - f * a[i][c] for c in range(len(row)) if c != j])
        a = rest
        rank += 1
    return rank


def log_matrix(units: Sequence, p: int, k: int) -> LogMatrixResult:
    """Rows of ``log_p`` over the embeddings of each unit, with a certified rank."""
    rows = []
    for unit in units:
        descs = unit if isinstance(unit, list) else [unit]
        vals = [v for d in descs for v in embedding_values(d, p, k)]
        for v in vals:
            if v.valuation != 0:
                raise ValueError(f"{v} is not a p-adic unit")
        rows.append(tuple(log_p(v) for v in vals))
    if len({len(r) for r in rows}) > 1:
        raise ValueError("units have different numbers of embeddings")
    return LogMatrixResult(tuple(rows), padic_rank_lower_bound(rows), k)


@dataclass(frozen=True)
class InterpDetReport:
    valuation: int
    theta: int
    bound: int
    precision: int

    @property
    def holds(self) -> bool:
        return self.valuation >= self.bound


def interp_det_valuation(u, a: Sequence[int], y: Sequence[int], p: int | None = None,
                         prec: int | None = None, max_prec: int = 2000) -> InterpDetReport:
    """``v_p(det(u^(a_i y_j)))`` next to ``Theta_1(d) * v_p(u - 1)``.

    The determinant is taken exactly over Z on residues modulo ``p^K``; when
    it vanishes there, K is doubled.  A :class:`PadicNumber` input caps K at
    its own precision.
    """
    d = len(a)
    if len(y) != d or d == 0:
        raise ValueError("a and y must have the same positive length")
    if len(set(a)) != d or len(set(y)) != d:
        raise ValueError("entries of a and of y must be distinct")
    if isinstance(u, PadicNumber):
        p, cap = u.p, u.prec
        if u.valuation != 0:
            raise ValueError("u must be a unit")
        s = (u - 1).valuation
        exact = None
    else:
        if p is None:
            raise ValueError("a prime is required for rational u")
        exact = to_fraction(u)
        s = vp(exact - 1, p)
        cap = max_prec
    if s is None:
        s = cap
    if s < 1:
        raise ValueError("u must satisfy v_p(u - 1) >= 1")
    th = theta(1, d)
    bound = th * s
    k = min(prec or max(40, 2 * bound + 10), cap)
    while True:
        mod = p ** k
        base = (u.residue() if exact is None
                else exact.numerator * pow(exact.denominator, -1, mod)) % mod
        inv = pow(base, -1, mod)
        mat = [[pow(base, ai * yj, mod) if ai * yj >= 0 else pow(inv, -ai * yj, mod)
                for yj in y] for ai in a]
        det = det_int(mat) % mod
        if det:
            return InterpDetReport(_vp_int(det, p), th, bound, k)
        if k >= cap:
            raise PrecisionError(f"determinant vanishes modulo {p}^{k}; more digits are needed")
        k = min(2 * k, cap)
