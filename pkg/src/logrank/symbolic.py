"""Matrices over the Q-span of formal logarithm symbols.

An entry is a :data:`LinCombo`: a tuple of rational coefficients, one per
symbol of a :class:`SymbolSpace`.  Symbols are treated as Q-linearly (and
algebraically) independent, so every rank reported here is the generic,
structural one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import MultiPoly, format_rational, to_fraction
from .linalg import (Matrix, PolyMatrix, inverse_Q, kernel_Q, matmul, rank_profile_poly,
                     shape, transpose)

LinCombo = tuple[Fraction, ...]

ONE = "1"


@dataclass(frozen=True)
class SymbolSpace:
    """Ordered symbol names; with ``includes_one`` the symbol ``"1"`` is the constant."""

    names: tuple[str, ...]
    includes_one: bool = False

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("symbol names must be distinct")
        if self.includes_one and ONE not in self.names:
            object.__setattr__(self, "names", (ONE,) + tuple(self.names))
        if not self.includes_one and ONE in self.names:
            raise ValueError('"1" is reserved for the constant symbol')

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def one_index(self) -> int | None:
        return self.names.index(ONE) if self.includes_one else None

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown symbol {name!r}") from None

    def zero(self) -> LinCombo:
        return (Fraction(0),) * self.size


@dataclass(frozen=True)
class SymbolicMatrix:
    space: SymbolSpace
    entries: tuple[tuple[LinCombo, ...], ...]

    def __post_init__(self):
        r = self.space.size
        rows = tuple(tuple(tuple(to_fraction(c) for c in e) for e in row) for row in self.entries)
        if rows and len({len(row) for row in rows}) != 1:
            raise ValueError("ragged symbolic matrix")
        for row in rows:
            for e in row:
                if len(e) != r:
                    raise ValueError(f"entry has {len(e)} coefficients, space has {r} symbols")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def entry(self, i: int, j: int) -> LinCombo:
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(not any(e) for row in self.entries for e in row)

    @classmethod
    def from_dicts(cls, space: SymbolSpace, rows: Sequence[Sequence[dict]]) -> SymbolicMatrix:
        """Entries as ``{symbol: coefficient}`` maps; missing symbols are 0."""
        out = []
        for row in rows:
            new = []
            for cell in row:
                coeffs = [Fraction(0)] * space.size
                for name, c in cell.items():
                    coeffs[space.index(name)] += to_fraction(c)
                new.append(tuple(coeffs))
            out.append(tuple(new))
        return cls(space, tuple(out))

    def to_json(self) -> dict:
        names = self.space.names
        symbols = [n for n in names if n != ONE]
        return {
            "symbols": symbols,
            "includes_one": self.space.includes_one,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[{names[k]: format_rational(c) for k, c in enumerate(e) if c}
                         for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> SymbolicMatrix:
        space = SymbolSpace(tuple(data["symbols"]), bool(data.get("includes_one", False)))
        m = cls.from_dicts(space, data["entries"])
        if "rows" in data and data["rows"] != m.rows:
            raise ValueError("rows does not match entries")
        if "cols" in data and data["cols"] != m.cols:
            raise ValueError("cols does not match entries")
        return m

    def __str__(self) -> str:
        def fmt(e):
            parts = [f"{format_rational(c)}*{n}" for n, c in zip(self.space.names, e) if c]
            return " + ".join(parts) or "0"
        return "\n".join("[" + ", ".join(fmt(e) for e in row) + "]" for row in self.entries)


def decompose(m: SymbolicMatrix) -> list[Matrix]:
    """The rational matrices ``M_i`` with ``M = sum_i symbol_i * M_i``."""
    return [[[e[i] for e in row] for row in m.entries] for i in range(m.space.size)]


def assemble(space: SymbolSpace, parts: Sequence[Matrix]) -> SymbolicMatrix:
    if len(parts) != space.size:
        raise ValueError("one matrix per symbol is required")
    r, c = shape(parts[0])
    return SymbolicMatrix(space, tuple(
        tuple(tuple(to_fraction(parts[k][i][j]) for k in range(space.size)) for j in range(c))
        for i in range(r)))


def generic_matrix(m: SymbolicMatrix) -> PolyMatrix:
    """``M_x = sum_i x_i M_i``: one polynomial variable per symbol."""
    n = m.space.size
    return [[MultiPoly(n, {tuple(int(k == i) for k in range(n)): c for i, c in enumerate(e) if c})
             for e in row] for row in m.entries]


def specialized_matrix(m: SymbolicMatrix) -> PolyMatrix:
    """``M_x`` with the constant symbol set to 1 (requires ``includes_one``)."""
    k = m.space.one_index
    if k is None:
        raise ValueError("symbol space has no constant symbol")
    return [[e.substitute(k, 1) for e in row] for row in generic_matrix(m)]


def structural_rank(m: SymbolicMatrix, specialize: bool = False, method: str = "auto",
                    seed: int = 0) -> int:
    """Rank of ``M_x`` over the rational function field.

    The constant symbol (if any) is an independent variable, i.e. the
    homogenized matrix is used.  ``specialize=True`` instead returns the
    rank after setting that variable to 1.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    px = specialized_matrix(m) if specialize else generic_matrix(m)
    return rank_profile_poly(px, method, seed).rank


def multiply(p: Matrix | None, m: SymbolicMatrix, q: Matrix | None) -> SymbolicMatrix:
    """``P @ M @ Q`` computed componentwise on the decomposition."""
    parts = decompose(m)
    out = []
    for part in parts:
        if p is not None:
            part = matmul(p, part)
        if q is not None:
            part = matmul(part, q)
        out.append(part)
    if not out:
        return m
    r = len(p) if p is not None else m.rows
    c = len(q[0]) if q is not None else m.cols
    if r == 0 or c == 0:
        return SymbolicMatrix(m.space, tuple(() for _ in range(r)))
    return assemble(m.space, out)


def basis_change(m: SymbolicMatrix, new_basis: Sequence[Sequence]) -> SymbolicMatrix:
    """Re-express entries in the basis whose j-th symbol is ``sum_i B[i][j] * old_i``.

    Coefficient vectors transform as ``c' = B^{-1} c``.  The returned space
    keeps the same names, now standing for the new symbols.
    """
    r = m.space.size
    if shape(new_basis) != (r, r):
        raise ValueError(f"basis change must be {r}x{r}")
    inv = inverse_Q(new_basis)  # raises ZeroDivisionError when singular
    rows = []
    for row in m.entries:
        rows.append(tuple(
            tuple(sum((inv[i][k] * e[k] for k in range(r)), Fraction(0)) for i in range(r))
            for e in row))
    space = m.space
    if space.includes_one:
        k = space.one_index
        fixes_one = all(inv[i][k] == int(i == k) for i in range(r))
        if not fixes_one:
            space = SymbolSpace(tuple(n if n != ONE else "c0" for n in space.names), False)
    return SymbolicMatrix(space, tuple(rows))


@dataclass(frozen=True)
class Dependence:
    side: str  # "rows" or "cols"
    vector: tuple[int, ...]


def _flatten_rows(m: SymbolicMatrix) -> Matrix:
    return [[c for e in row for c in e] for row in m.entries]


def row_col_dependence(m: SymbolicMatrix) -> Dependence | None:
    """A rational relation among the rows (checked first) or the columns."""
    if m.rows == 0 or m.cols == 0:
        return None
    flat = _flatten_rows(m)
    ker = kernel_Q(transpose(flat), m.rows)
    if ker:
        return Dependence("rows", ker[0])
    flat_cols = [[c for e in col for c in e] for col in zip(*m.entries)]
    ker = kernel_Q(transpose(flat_cols), m.cols)
    if ker:
        return Dependence("cols", ker[0])
    return None


def check_dependence(m: SymbolicMatrix, dep: Dependence) -> bool:
    """Independent check that the combination annihilates every coefficient."""
    v = [Fraction(x) for x in dep.vector]
    if not any(v):
        return False
    r = m.space.size
    if dep.side == "rows":
        if len(v) != m.rows:
            return False
        return all(sum(v[i] * m.entries[i][j][k] for i in range(m.rows)) == 0
                   for j in range(m.cols) for k in range(r))
    if dep.side == "cols":
        if len(v) != m.cols:
            return False
        return all(sum(v[j] * m.entries[i][j][k] for j in range(m.cols)) == 0
                   for i in range(m.rows) for k in range(r))
    return False


def direct_sum(a: SymbolicMatrix, b: SymbolicMatrix) -> SymbolicMatrix:
    if a.space != b.space:
        raise ValueError("direct sum needs a common symbol space")
    z = a.space.zero()
    rows = [tuple(row) + (z,) * b.cols for row in a.entries]
    rows += [(z,) * a.cols + tuple(row) for row in b.entries]
    return SymbolicMatrix(a.space, tuple(rows))
