from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from logrank.core import (MinPolyData, MultiPoly, format_rational, homogenize, monomials_below,
                          poly_arith, power_basis_coeffs, to_fraction)

from conftest import random_poly

X = sympy.symbols("x1:4")


def to_sympy(p: MultiPoly):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator)
                       * sympy.Mul(*[X[i] ** e for i, e in enumerate(m)])
                       for m, c in p.items()])


def test_to_fraction_and_format():
    assert to_fraction("3/6") == Fraction(1, 2)
    assert to_fraction(-4) == Fraction(-4)
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(TypeError):
        to_fraction(0.5)


def test_zero_pruning_and_degree():
    p = MultiPoly(2, {(1, 0): 1, (0, 1): 0})
    assert len(p) == 1
    assert MultiPoly.zero(2).degree() == -1
    assert (p - p).is_zero()


def test_arithmetic_matches_sympy(rng):
    for _ in range(40):
        a, b = random_poly(rng, 3, 3), random_poly(rng, 3, 2)
        for op, f in (("add", sympy.Add), ("mul", sympy.Mul)):
            got = to_sympy(poly_arith(a, b, op))
            assert sympy.expand(got - f(to_sympy(a), to_sympy(b))) == 0
        assert sympy.expand(to_sympy(a - b) - to_sympy(a) + to_sympy(b)) == 0
    with pytest.raises(ValueError):
        poly_arith(MultiPoly.zero(1), MultiPoly.zero(2), "add")


def test_spec_style_small_cases():
    x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    assert poly_arith(x, x, "add") == x.scale(2)
    assert poly_arith(x + 1, x - 1, "mul") == x * x - 1
    cube = (x + y) ** 3
    assert cube == (x + y) * (x + y) * (x + y)
    assert cube.coefficient((2, 1)) == 3
    assert (x * y).evaluate([2, 3]) == 6


def test_exact_div(rng):
    for _ in range(20):
        a, b = random_poly(rng, 2, 2), random_poly(rng, 2, 2)
        assert (a * b).exact_div(b) == a
    x = MultiPoly.variable(2, 0)
    with pytest.raises(ArithmeticError):
        (x + 1).exact_div(x)


def test_evaluate_and_substitute(rng):
    p = random_poly(rng, 3, 3)
    pt = [Fraction(1, 2), Fraction(-3), Fraction(2, 5)]
    expect = to_sympy(p).subs({X[i]: sympy.Rational(v.numerator, v.denominator) for i, v in enumerate(pt)})
    assert p.evaluate(pt) == Fraction(int(sympy.numer(expect)), int(sympy.denom(expect)))
    q = p.substitute(1, pt[1])
    assert q.degree_in(1) == 0
    assert q.evaluate([pt[0], 99, pt[2]]) == p.evaluate(pt)


def test_homogenize():
    x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    h = homogenize(x * y - 1)
    assert h == MultiPoly(3, {(0, 1, 1): 1, (2, 0, 0): -1})
    assert all(sum(m) == 2 for m, _ in h.items())


def test_json_roundtrip(rng):
    p = random_poly(rng, 3, 4)
    assert MultiPoly.from_json(p.to_json()) == p
    assert MultiPoly.from_json({"nvars": 3, "terms": []}) == MultiPoly.zero(3)


def test_monomials_below():
    ms = monomials_below(2, 3)
    assert len(ms) == 6
    assert ms[0] == (0, 0)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=4), st.integers(1, 4), st.integers(0, 9))
def test_power_basis_matches_polynomial_remainder(lower, lead, j):
    t = sympy.symbols("t")
    coeffs = lower + [lead]
    m = MinPolyData.from_coefficients(coeffs)
    f = sympy.Poly(list(reversed(coeffs)), t, domain="QQ")
    rem = sympy.Poly((lead * t) ** j, t, domain="QQ").rem(f)
    expect = [rem.coeff_monomial(t ** s) for s in range(m.degree)]
    assert all(sympy.Rational(e).q == 1 for e in expect)  # integrality
    assert list(power_basis_coeffs(m, j)) == [int(e) for e in expect]


def test_power_basis_small_fields():
    assert power_basis_coeffs(MinPolyData.from_coefficients([-2, 0, 1]), 2) == (2, 0)
    assert power_basis_coeffs(MinPolyData.from_coefficients([-1, -1, 1]), 2) == (1, 1)
    # 2x^2 - 3x - 1: check (2 alpha)^3 at both roots
    m = MinPolyData.from_coefficients([-1, -3, 2])
    a = power_basis_coeffs(m, 3)
    for root in sympy.solve(2 * sympy.Symbol("t") ** 2 - 3 * sympy.Symbol("t") - 1):
        assert sympy.simplify((2 * root) ** 3 - (a[0] + a[1] * root)) == 0


def test_power_basis_scaled_leading_coefficient():
    # alpha root of 2t^2 - 3: (2 alpha)^2 = 2*3 = 6, so c^2 alpha^2 gives (6, 0)
    m = MinPolyData.from_coefficients([-3, 0, 2])
    assert power_basis_coeffs(m, 2) == (6, 0)
