"""Exact scalars and sparse multivariate polynomials over Q.

Rationals are plain :class:`fractions.Fraction` values.  Polynomials are
immutable maps from exponent tuples to nonzero Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"a/b"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction | int) -> str:
    """Canonical text form: ``"a/b"`` with b > 0, or ``"a"`` when b == 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def grlex_key(mono: Monomial) -> tuple:
    return (sum(mono), mono)


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables with rational coefficients.

    Position ``i`` of an exponent tuple is the variable printed as ``x{i+1}``.
    Instances are immutable and hashable.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        if nvars < 0:
            raise ValueError("variable count must be nonnegative")
        clean: dict[Monomial, Fraction] = {}
        for mono, coef in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} does not have {nvars} exponents")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = clean.get(mono, Fraction(0)) + to_fraction(coef)
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, Fraction]) -> MultiPoly:
        # trusted constructor: caller guarantees pruned Fraction coefficients
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars: int) -> MultiPoly:
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> MultiPoly:
        c = to_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> MultiPoly:
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls._raw(nvars, {mono: Fraction(1)})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((m[index] for m in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def leading_term(self) -> tuple[Monomial, Fraction]:
        mono = max(self._terms, key=grlex_key)
        return mono, self._terms[mono]

    def _check(self, other: MultiPoly) -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> MultiPoly:
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other) -> MultiPoly:
        other = self._coerce(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono)
            if s is None:
                out[mono] = c
            else:
                s += c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> MultiPoly:
        return self._coerce(other) - self

    def scale(self, c) -> MultiPoly:
        c = to_fraction(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other) -> MultiPoly:
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        if len(self._terms) < len(other._terms):
            a, b = self._terms, other._terms
        else:
            a, b = other._terms, self._terms
        out: dict[Monomial, Fraction] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                mono = tuple(x + y for x, y in zip(ma, mb))
                out[mono] = out.get(mono, 0) + ca * cb
        return MultiPoly._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def exact_div(self, other: MultiPoly) -> MultiPoly:
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_constant():
            return self.scale(1 / other.constant_term())
        lm, lc = other.leading_term()
        rem = dict(self._terms)
        quot: dict[Monomial, Fraction] = {}
        while rem:
            mono = max(rem, key=grlex_key)
            diff = tuple(a - b for a, b in zip(mono, lm))
            if any(e < 0 for e in diff):
                raise ArithmeticError("polynomial division is not exact")
            q = rem[mono] / lc
            quot[diff] = q
            for mb, cb in other._terms.items():
                key = tuple(a + b for a, b in zip(diff, mb))
                v = rem.get(key, 0) - q * cb
                if v:
                    rem[key] = v
                else:
                    rem.pop(key, None)
        return MultiPoly._raw(self.nvars, quot)

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(
                f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        pt = [to_fraction(v) for v in point]
        powers: list[dict[int, Fraction]] = [{0: Fraction(1)} for _ in pt]
        total = Fraction(0)
        for mono, c in self._terms.items():
            term = c
            for i, e in enumerate(mono):
                if e:
                    cache = powers[i]
                    v = cache.get(e)
                    if v is None:
                        v = cache[e] = pt[i] ** e
                    term *= v
            total += term
        return total

    def substitute(self, index: int, value) -> MultiPoly:
        """Specialize one variable to a rational value, keeping ``nvars``."""
        value = to_fraction(value)
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            e = mono[index]
            new = mono[:index] + (0,) + mono[index + 1:]
            out[new] = out.get(new, 0) + c * value ** e
        return MultiPoly._raw(self.nvars, {m: c for m, c in out.items() if c})

    def drop_variable(self, index: int) -> MultiPoly:
        """Remove a variable that does not occur."""
        if self.degree_in(index) > 0:
            raise ValueError(f"variable {index} occurs in the polynomial")
        return MultiPoly._raw(
            self.nvars - 1, {m[:index] + m[index + 1:]: c for m, c in self._terms.items()})

    def homogenize(self) -> MultiPoly:
        """Pad every monomial with a new variable at position 0 up to ``deg(self)``."""
        d = max(self.degree(), 0)
        return MultiPoly._raw(
            self.nvars + 1, {(d - sum(m),) + m: c for m, c in self._terms.items()})

    def content_primitive(self) -> tuple[Fraction, MultiPoly]:
        """Split as ``content * primitive`` with integer coprime coefficients.

        The primitive part has a positive leading (grlex) coefficient.
        """
        if self.is_zero():
            return Fraction(0), self
        from math import gcd, lcm

        den = lcm(*(c.denominator for c in self._terms.values()))
        nums = [int(c * den) for c in self._terms.values()]
        g = gcd(*nums)
        _, lc = self.leading_term()
        content = Fraction(g, den) * (1 if lc > 0 else -1)
        return content, self.scale(1 / content)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def to_json(self) -> list[dict]:
        return [{"exps": list(m), "coef": format_rational(c)} for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, nvars: int | None = None) -> MultiPoly:
        """Parse the term-list form, or ``{"nvars": n, "terms": [...]}``."""
        if isinstance(data, dict):
            nvars = data.get("nvars", nvars)
            data = data["terms"]
        if not isinstance(data, list):
            raise ValueError("polynomial must be a list of terms")
        terms: dict[Monomial, Fraction] = {}
        for t in data:
            mono = tuple(int(e) for e in t["exps"])
            if nvars is None:
                nvars = len(mono)
            terms[mono] = terms.get(mono, Fraction(0)) + to_fraction(t["coef"])
        if nvars is None:
            raise ValueError("cannot infer the variable count of an empty term list")
        return cls(nvars, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if factors:
                body = "*".join(factors) if mag == 1 else f"{format_rational(mag)}*" + "*".join(factors)
            else:
                body = format_rational(mag)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_eval(p: MultiPoly, point: Sequence) -> Fraction:
    return p.evaluate(point)


def homogenize(p: MultiPoly) -> MultiPoly:
    return p.homogenize()


def monomials_below(nvars: int, degree_bound: int) -> list[Monomial]:
    """All monomials of total degree < ``degree_bound``, ascending grlex."""
    out = [m for m in product(range(degree_bound), repeat=nvars) if sum(m) < degree_bound]
    return sorted(out, key=grlex_key)


@dataclass(frozen=True)
class MinPolyData:
    """``c*x^d - b[d-1]*x^(d-1) - ... - b[0]`` with integer data."""

    leading: int
    lower: tuple[int, ...]

    def __post_init__(self):
        if self.leading == 0:
            raise ValueError("leading coefficient must be nonzero")
        if not self.lower:
            raise ValueError("degree must be positive")

    @property
    def degree(self) -> int:
        return len(self.lower)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int]) -> MinPolyData:
        """From ascending coefficients ``[c0, c1, ..., cd]`` of the polynomial."""
        *low, lead = [int(c) for c in coeffs]
        return cls(lead, tuple(-c for c in low))

    def as_poly(self) -> MultiPoly:
        terms = {(self.degree,): self.leading}
        for s, b in enumerate(self.lower):
            if b:
                terms[(s,)] = -b
        return MultiPoly(1, terms)


def power_basis_coeffs(m: MinPolyData, j: int) -> tuple[int, ...]:
    """Integers ``a[s]`` with ``(c*alpha)^j = sum_s a[s] * alpha^s``.

    Uses the integer recurrence obtained by multiplying the previous row by
    ``c*alpha`` and rewriting ``c*alpha^d`` with the minimal polynomial.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    d, c, b = m.degree, m.leading, m.lower
    if j < d:
        return tuple(c ** j if s == j else 0 for s in range(d))
    a = [c ** (d - 1) if s == d - 1 else 0 for s in range(d)]
    for _ in range(d, j + 1):
        top = a[d - 1]
        a = [top * b[0]] + [top * b[s] + c * a[s - 1] for s in range(1, d)]
    return tuple(a)


def iter_rationals(values: Iterable) -> list[Fraction]:
    return [to_fraction(v) for v in values]
