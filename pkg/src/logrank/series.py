"""Truncated power series over Q: exp, log and integer relations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .core import format_rational, to_fraction
from .intlattice import integer_kernel


@dataclass(frozen=True)
class TruncatedSeries:
    """``c_0 + c_1 t + ... + c_{T-1} t^(T-1) + O(t^T)``."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        cs = [to_fraction(c) for c in self.coeffs][:self.order]
        cs += [Fraction(0)] * (self.order - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, coeffs: Sequence, order: int) -> TruncatedSeries:
        return cls(order, tuple(coeffs))

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls(order, (Fraction(1),))

    @classmethod
    def t(cls, order: int) -> TruncatedSeries:
        return cls(order, (0, 1))

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def _common(self, other: TruncatedSeries) -> int:
        return min(self.order, other.order)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        k = self._common(other)
        return TruncatedSeries(k, tuple(self[i] + other[i] for i in range(k)))

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        k = self._common(other)
        return TruncatedSeries(k, tuple(self[i] - other[i] for i in range(k)))

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.order, tuple(-c for c in self.coeffs))

    def scale(self, c) -> TruncatedSeries:
        c = to_fraction(c)
        return TruncatedSeries(self.order, tuple(c * x for x in self.coeffs))

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        k = self._common(other)
        out = [Fraction(0)] * k
        for i in range(k):
            if self[i]:
                for j in range(k - i):
                    out[i + j] += self[i] * other[j]
        return TruncatedSeries(k, tuple(out))

    def inverse(self) -> TruncatedSeries:
        if self[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        k = self.order
        out = [Fraction(0)] * k
        out[0] = 1 / self[0]
        for n in range(1, k):
            out[n] = -sum((self[i] * out[n - i] for i in range(1, n + 1)), Fraction(0)) / self[0]
        return TruncatedSeries(k, tuple(out))

    def __pow__(self, e: int) -> TruncatedSeries:
        if e < 0:
            return self.inverse() ** (-e)
        out, base = TruncatedSeries.one(self.order), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> TruncatedSeries:
        return cls(int(data["order"]), tuple(to_fraction(c) for c in data["coeffs"]))


def series_exp(y: TruncatedSeries) -> TruncatedSeries:
    """``exp(y)`` from ``z' = y' z``, i.e. ``n z_n = sum_k k y_k z_(n-k)``."""
    if y[0] != 0:
        raise ValueError("exp needs a zero constant term")
    k = y.order
    z = [Fraction(0)] * k
    z[0] = Fraction(1)
    for n in range(1, k):
        z[n] = sum((j * y[j] * z[n - j] for j in range(1, n + 1)), Fraction(0)) / n
    return TruncatedSeries(k, tuple(z))


def series_log(z: TruncatedSeries) -> TruncatedSeries:
    """``log(z)`` for ``z_0 = 1``, inverting the exp recurrence."""
    if z[0] != 1:
        raise ValueError("log needs constant term 1")
    k = z.order
    y = [Fraction(0)] * k
    for n in range(1, k):
        acc = n * z[n] - sum((j * y[j] * z[n - j] for j in range(1, n)), Fraction(0))
        y[n] = acc / n
    return TruncatedSeries(k, tuple(y))


@dataclass(frozen=True)
class SeriesRelations:
    """Integer relations valid modulo ``t^order`` only."""

    order: int
    basis: tuple[tuple[int, ...], ...]


def relation_detect(ys: Sequence[TruncatedSeries]) -> SeriesRelations:
    """All ``m in Z^n`` with ``sum m_i y_i = 0 mod t^T``."""
    if not ys:
        raise ValueError("at least one series is required")
    orders = {y.order for y in ys}
    if len(orders) != 1:
        raise ValueError("series must share one truncation order")
    if any(y[0] != 0 for y in ys):
        raise ValueError("series must have zero constant term")
    order = orders.pop()
    n = len(ys)
    rows = [[y[i] for y in ys] for i in range(1, order)]
    # clear denominators per row; the kernel is unchanged
    int_rows = []
    for row in rows:
        den = lcm(*(c.denominator for c in row))
        int_rows.append([int(c * den) for c in row])
    return SeriesRelations(order, tuple(integer_kernel(int_rows, n)))


def check_relation(ys: Sequence[TruncatedSeries], m: Sequence[int]) -> bool:
    if len(m) != len(ys):
        return False
    total = TruncatedSeries(ys[0].order, ())
    for y, c in zip(ys, m):
        total = total + y.scale(c)
    return total.is_zero()


def product_exp_identity(ys: Sequence[TruncatedSeries], ms: Sequence[int]) -> bool:
    """``prod exp(y_i)^(m_i) == exp(sum m_i y_i)`` modulo ``t^T``."""
    if len(ys) != len(ms):
        raise ValueError("one exponent per series is required")
    order = min(y.order for y in ys)
    lhs = TruncatedSeries.one(order)
    total = TruncatedSeries(order, ())
    for y, m in zip(ys, ms):
        lhs = lhs * series_exp(y) ** int(m)
        total = total + y.scale(m)
    rhs = series_exp(total)
    if lhs != rhs:
        return False
    return not total.is_zero() or lhs == TruncatedSeries.one(order)
