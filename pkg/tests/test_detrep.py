from fractions import Fraction

import pytest

from logrank.core import MultiPoly
from logrank.detrep import (constant_matrix, determinantal_rep, embed_square, factor_ab,
                            homogenize_affine, is_affine, matrix_product, prune_units,
                            rep_dimension, verify_rep)
from logrank.linalg import det_poly

from conftest import random_poly


def test_x1x2_minus_one():
    x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    p = x1 * x2 - 1
    mat = determinantal_rep(p)
    assert len(mat) == 4 == rep_dimension(2, 2)
    assert is_affine(mat)
    assert det_poly(mat) == p
    assert verify_rep(mat, p, "randomized")


def test_linear_and_constant():
    x = MultiPoly.variable(1, 0)
    assert determinantal_rep(x + 3) == [[x + 3]]
    assert determinantal_rep(MultiPoly.constant(1, 7)) == [[MultiPoly.constant(1, 7)]]


def test_factor_ab_product(rng):
    for _ in range(10):
        n = rng.randint(1, 3)
        m = rng.randint(1, 3)
        d = rng.randint(1, 3)
        mat = [[random_poly(rng, n, rng.randint(0, d), terms=3) for _ in range(m)] for _ in range(m)]
        a, b = factor_ab(mat, d)
        assert matrix_product(a, b) == mat
        assert all(e.degree() <= d - 1 for row in a for e in row)


def test_square_lemma(rng):
    for _ in range(15):
        m, s = rng.randint(1, 3), rng.randint(1, 4)
        a = [[random_poly(rng, 2, rng.randint(0, 1), terms=2) for _ in range(s)] for _ in range(m)]
        b = [[random_poly(rng, 2, rng.randint(0, 1), terms=2) for _ in range(m)] for _ in range(s)]
        assert det_poly(embed_square(a, b)) == det_poly(matrix_product(a, b))


def test_random_corpus(rng):
    for _ in range(20):
        n, d = rng.randint(1, 3), rng.randint(1, 4)
        p = random_poly(rng, n, d)
        mat = determinantal_rep(p)
        assert len(mat) == rep_dimension(n, d)
        assert verify_rep(mat, p, "symbolic")
        assert verify_rep(mat, p, "randomized", seed=1)
        pruned = determinantal_rep(p, prune=True)
        assert is_affine(pruned) and len(pruned) <= len(mat)
        assert verify_rep(pruned, p, "symbolic")


def test_verify_rejects_wrong_matrix():
    x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    p = x1 * x2 - 1
    mat = [list(r) for r in determinantal_rep(p)]
    mat[0][0] = mat[0][0] + x1
    assert not verify_rep(mat, p, "symbolic")
    assert not verify_rep(mat, p, "randomized")
    assert not verify_rep([[x1, x2]], p)


def test_prune_keeps_determinant():
    m = constant_matrix([[2, 0], [0, 3]], 1)
    assert prune_units(m) == [[MultiPoly.constant(1, 6)]]


def test_homogenize_affine():
    x = MultiPoly.variable(1, 0)
    h = homogenize_affine([[x + 2]])
    assert h == [[MultiPoly(2, {(0, 1): 1, (1, 0): 2})]]
    with pytest.raises(ValueError):
        homogenize_affine([[x * x]])


def test_degree_bound_error():
    x = MultiPoly.variable(1, 0)
    with pytest.raises(ValueError):
        factor_ab([[x ** 3]], 2)
    with pytest.raises(ValueError):
        embed_square([[x]], [[x], [x]])
