import itertools
import math
from fractions import Fraction

import pytest

from logrank.core import MultiPoly
from logrank.intlattice import lattice_contains
from logrank.relations import (HypothesisError, enumerate_xn, factor_rational, laurent_lower_bound,
                               laurent_threshold, pairing, power_product, relation_lattice,
                               row_relation_lattice, subgroup_pairing_trivial, theta,
                               theta_by_enumeration, vandermonde_relation, vanishing_poly,
                               verify_relation_lattice)

T1, T2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)


def brute_relations(vals, box=5):
    return [lam for lam in itertools.product(range(-box, box + 1), repeat=len(vals))
            if any(lam) and power_product(vals, lam) == 1]


def test_factor_rational():
    assert factor_rational(Fraction(-12, 5)) == (1, {2: 2, 3: 1, 5: -1})
    with pytest.raises(ValueError):
        factor_rational(0)


def test_lattice_examples():
    assert relation_lattice([2, 4]).basis == ((2, -1),)
    assert relation_lattice([2, 3]).basis == ()
    assert relation_lattice([4, 8]).basis == ((3, -2),)
    # signs: (-1)^2 = 1 but -1 != 1
    assert relation_lattice([-1]).basis == ((2,),)
    assert relation_lattice([-2, 2]).basis == ((2, -2),) or \
        verify_relation_lattice([-2, 2], relation_lattice([-2, 2]).basis)


def test_lattice_against_brute_force(rng):
    for _ in range(40):
        n = rng.randint(1, 3)
        vals = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 12), rng.randint(1, 12)) for _ in range(n)]
        lat = relation_lattice(vals)
        assert all(power_product(vals, v) == 1 for v in lat.basis)
        for lam in brute_relations(vals, 4 if n == 3 else 5):
            assert lattice_contains(lat.basis, lam)
        assert verify_relation_lattice(vals, lat.basis)


def test_verify_rejects_partial_lattice():
    assert not verify_relation_lattice([2, 4], [(4, -2)])
    assert not verify_relation_lattice([2, 4], [(1, 1)])


def test_vandermonde_examples():
    assert vandermonde_relation([2, Fraction(1, 2)], T1 * T2 - 1, 1) == (1, 1)
    rel = vandermonde_relation([4, 8], T1 ** 3 - T2 ** 2, 3)
    assert rel == (3, -2)
    for f in (T1 - T2, T1 * T2 - 1, T1 ** 2 - T2):
        with pytest.raises(HypothesisError):
            vandermonde_relation([2, 3], f, 2)


def test_vandermonde_planted(rng):
    for _ in range(10):
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        g = Fraction(rng.choice([2, 3, 5]))
        vals = [g ** b, g ** a]  # (g^b)^a = (g^a)^b
        f = T1 ** a - T2 ** b
        rel = vandermonde_relation(vals, f, max(a, b))
        assert any(rel) and power_product(vals, rel) == 1


def test_vandermonde_caps():
    with pytest.raises(ValueError):
        vandermonde_relation([2, 4], T1 ** 2 - T2, 2000, max_points=1000)
    with pytest.raises(HypothesisError):
        vandermonde_relation([2, 4], T1 ** 3 - T2, 2)


def test_xn_examples():
    assert enumerate_xn([[2, 3]], 2).points == ((1, 1), (2, 3), (4, 9))
    assert enumerate_xn([[2, 3], [2, 3]], 1).size == 3
    assert enumerate_xn([[2, 3], [5, 7]], 2).size == 9


def test_xn_size_iff_small_relation(rng):
    for _ in range(15):
        m, n = rng.randint(1, 2), 2
        base = [2, 3, 6]
        g = [[Fraction(rng.choice(base)) ** rng.randint(0, 2) for _ in range(n)] for _ in range(m)]
        if any(x == 1 for row in g for x in row) and rng.random() < 0.5:
            continue
        big_n = rng.randint(1, 2)
        lat = row_relation_lattice(g)
        small = any(any(lam) and lattice_contains(lat.basis, lam)
                    for lam in itertools.product(range(-big_n, big_n + 1), repeat=m))
        assert (enumerate_xn(g, big_n).size < (big_n + 1) ** m) == small


def test_vanishing_poly():
    p = vanishing_poly([(1, 1)], 2)
    assert p is not None and p.evaluate([1, 1]) == 0 and p.degree() < 2
    curve = enumerate_xn([[2, 3]], 3).points
    p = vanishing_poly(curve, 2)
    assert p is None  # 4 points, 3 monomials of degree < 2, and the points are not collinear
    p = vanishing_poly(curve, 3)
    assert p is not None and all(p.evaluate(x) == 0 for x in curve)
    pts = [(0, 0), (1, 0), (0, 1), (2, 3), (5, 7)]
    p = vanishing_poly(pts, 3)
    assert p is not None and p.degree() < 3 and all(p.evaluate(x) == 0 for x in pts)


def test_pairing():
    g = [[2, 3], [5, 7]]
    assert pairing(g, [0, 0], [1, 1]) == 1
    assert pairing([[2]], [1], [3]) == 8
    a, a2, b = [1, 2], [-1, 3], [2, -1]
    assert pairing(g, [x + y for x, y in zip(a, a2)], b) == pairing(g, a, b) * pairing(g, a2, b)


def test_subgroup_pairing():
    g = [[1, 3], [5, 7]]
    rep = subgroup_pairing_trivial(g, [], [])
    assert rep.trivial and not rep.threshold_met
    assert subgroup_pairing_trivial(g, [(1, 0)], [(1, 0)]).trivial
    # planted: the first row is 1 everywhere, so A = <e1> kills all of B = Z^2
    g2 = [[1, 1], [5, 7]]
    rep = subgroup_pairing_trivial(g2, [(1, 0)], [(1, 0), (0, 1)])
    assert rep.trivial and rep.threshold_met


def test_theta():
    assert [theta(1, d) for d in range(1, 201)] == [d * (d - 1) // 2 for d in range(1, 201)]
    assert theta(2, 3) == 2
    assert all(theta(r, 1) == 0 for r in range(1, 6))
    for r in (2, 3):
        for d in range(1, 21):
            assert theta(r, d) == theta_by_enumeration(r, d)


def test_laurent_threshold():
    for r in (2, 3):
        d0 = laurent_threshold(r, 400)
        assert d0 is not None
        assert all(theta(r, d) > laurent_lower_bound(r, d) for d in range(d0, 401))
    assert math.isclose(laurent_lower_bound(1, 6), 6 ** 2 / (6 * math.e))
