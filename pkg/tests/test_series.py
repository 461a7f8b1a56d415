import math
from fractions import Fraction

import pytest

from logrank.intlattice import lattice_contains
from logrank.series import (TruncatedSeries, check_relation, product_exp_identity, relation_detect,
                            series_exp, series_log)

T = 12


def random_series(rng, order=T, h=5):
    return TruncatedSeries.of([0] + [Fraction(rng.randint(-h, h), rng.randint(1, h)) for _ in range(order - 1)], order)


def test_exp_log_known_expansions():
    assert series_exp(TruncatedSeries(T, ())) == TruncatedSeries.one(T)
    assert series_exp(TruncatedSeries.t(T)).coeffs == tuple(Fraction(1, math.factorial(k)) for k in range(T))
    assert series_log(TruncatedSeries.one(T)).is_zero()
    log1p = series_log(TruncatedSeries.of([1, 1], T))
    assert log1p.coeffs == (0,) + tuple(Fraction((-1) ** (k + 1), k) for k in range(1, T))


def test_domain_errors():
    with pytest.raises(ValueError):
        series_exp(TruncatedSeries.one(T))
    with pytest.raises(ValueError):
        series_log(TruncatedSeries.of([2, 1], T))
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries.t(T).inverse()


def test_exp_homomorphism_and_roundtrip(rng):
    for _ in range(10):
        y1, y2 = random_series(rng), random_series(rng)
        assert series_exp(y1 + y2) == series_exp(y1) * series_exp(y2)
        assert series_log(series_exp(y1)) == y1


def test_orders_combine_to_minimum():
    a, b = TruncatedSeries.t(5), TruncatedSeries.t(8)
    assert (a + b).order == 5 and (a * b).order == 5


def test_relation_examples():
    t = TruncatedSeries.t(T)
    assert relation_detect([t, t.scale(2)]).basis == ((2, -1),)
    for order in (3, 6, 12):
        t = TruncatedSeries.t(order)
        assert relation_detect([t, t * t]).basis == ()


def test_planted_relations(rng):
    for _ in range(15):
        n = rng.randint(2, 4)
        base = [random_series(rng) for _ in range(n - 1)]
        m = [rng.randint(-3, 3) for _ in range(n - 1)]
        last = TruncatedSeries(T, ())
        for c, y in zip(m, base):
            last = last + y.scale(c)
        ys = base + [last]
        rel = relation_detect(ys)
        assert rel.order == T and all(check_relation(ys, v) for v in rel.basis)
        planted = tuple(m) + (-1,)
        assert lattice_contains(rel.basis, planted)


def test_truncation_caveat():
    # t + t^5 agrees with t below order 5, so truncation creates a relation
    ys = [TruncatedSeries.t(5), TruncatedSeries.of([0, 1, 0, 0, 0, 1], 5)]
    assert relation_detect(ys).basis == ((1, -1),)
    assert relation_detect([TruncatedSeries.t(7), TruncatedSeries.of([0, 1, 0, 0, 0, 1], 7)]).basis == ()


def test_product_exp(rng):
    t = TruncatedSeries.t(T)
    assert product_exp_identity([t, t.scale(2)], [0, 0])
    assert product_exp_identity([t, t.scale(2)], [2, -1])
    for _ in range(10):
        n = rng.randint(1, 4)
        ys = [random_series(rng) for _ in range(n)]
        assert product_exp_identity(ys, [rng.randint(-3, 3) for _ in range(n)])


def test_json_roundtrip():
    s = TruncatedSeries.of([0, Fraction(1, 3), -2], 4)
    assert s.to_json() == {"order": 4, "coeffs": ["0", "1/3", "-2", "0"]}
    assert TruncatedSeries.from_json(s.to_json()) == s
