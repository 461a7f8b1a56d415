from fractions import Fraction

import pytest
from math import gcd

from logrank.linalg import det_Q, matmul
from logrank.symbolic import SymbolicMatrix, SymbolSpace, assemble, structural_rank
from logrank.wm import (MccWitness, ZeroBlockCertificate, check_mcc_witness, find_zero_block,
                        height_vectors, mcc_witness, meets_threshold, planted_block,
                        rank_threshold, six_exponentials_check, verify_zero_block)

XYZ = SymbolSpace(("x", "y", "z"))


def sym(space, rows):
    return SymbolicMatrix.from_dicts(space, rows)


def eye(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def random_invertible(rng, n, h=2):
    while True:
        a = [[Fraction(rng.randint(-h, h)) for _ in range(n)] for _ in range(n)]
        if det_Q(a) != 0:
            return a


def random_symbolic(rng, space, m, n, h=2):
    parts = [[[rng.randint(-h, h) for _ in range(n)] for _ in range(m)] for _ in range(space.size)]
    return assemble(space, parts)


def planted_instance(rng):
    """A conjugated matrix with a threshold-meeting zero block in the top-right."""
    m, n = rng.randint(2, 4), rng.randint(2, 4)
    grid = [(a, b) for a in range(1, m + 1) for b in range(1, n + 1)
            if meets_threshold(a, b, m, n) and (a, b) != (m, n)]
    mp, np_ = rng.choice(grid)
    space = SymbolSpace(tuple(f"s{k}" for k in range(rng.randint(1, 3))))
    blocks = {}
    for k in range(space.size):
        b = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(m)]
        for i in range(mp):
            for j in range(n - np_, n):
                b[i][j] = Fraction(0)
        blocks[k] = b
    p0 = random_invertible(rng, m, 1)
    q0 = random_invertible(rng, n, 1)
    return planted_block(space, blocks, p0, q0)


EXAMPLE = sym(XYZ, [[{"x": 1}, {"z": 1}, {}], [{}, {"y": 1}, {"x": -1}], [{"y": 1}, {}, {"z": 1}]])


def test_rank_threshold():
    m = sym(XYZ, [[{"x": 1}, {"y": 1}, {"z": 1}], [{"x": 2}, {"y": 2}, {"z": 2}]])
    rep = rank_threshold(m)
    assert (rep.structural_rank, rep.threshold, rep.hypothesis) == (1, Fraction(6, 5), True)
    ident = sym(XYZ, [[{"x": 1}, {}, {}], [{}, {"y": 1}, {}], [{}, {}, {"z": 1}]])
    assert not rank_threshold(ident).hypothesis
    r1 = sym(XYZ, [[{"x": 1}, {"x": 1}, {"x": 1}]] * 3)
    rep = rank_threshold(r1)
    assert (rep.structural_rank, rep.threshold, rep.hypothesis) == (1, Fraction(3, 2), True)


def test_literal_zero_block():
    m = sym(XYZ, [[{"x": 1}, {}, {}], [{"y": 1}, {}, {}], [{"z": 1}, {"x": 1}, {"y": 1}]])
    cert = ZeroBlockCertificate(eye(3), eye(3), 2, 2)
    check = verify_zero_block(m, cert)
    assert check.ok and check.threshold_met
    found = find_zero_block(m, "exhaustive", 1)
    assert found is not None and verify_zero_block(m, found).threshold_met


def test_random_matrix_rejected_with_witness(rng):
    m = random_symbolic(rng, XYZ, 3, 3)
    cert = ZeroBlockCertificate(random_invertible(rng, 3), random_invertible(rng, 3), 2, 2)
    check = verify_zero_block(m, cert)
    assert not check.ok and check.witness is not None
    i, j = check.witness
    assert i < 2 and j >= 1


def test_singular_transform_rejected():
    sing = [[Fraction(1), Fraction(2), Fraction(0)], [Fraction(2), Fraction(4), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(1)]]
    with pytest.raises(ValueError):
        verify_zero_block(EXAMPLE, ZeroBlockCertificate(sing, eye(3), 1, 1))
    with pytest.raises(ValueError):
        verify_zero_block(EXAMPLE, ZeroBlockCertificate(eye(3), sing, 1, 1))


def test_planted_recovered(rng):
    for _ in range(10):
        m = planted_instance(rng)
        cert = find_zero_block(m, "exhaustive", 2)
        assert cert is not None
        check = verify_zero_block(m, cert)
        assert check.ok and check.threshold_met


def test_alternating_finds_literal_block():
    m = sym(XYZ, [[{"x": 1}, {}, {}], [{"y": 1}, {}, {}], [{"z": 1}, {"x": 1}, {"y": 1}]])
    cert = find_zero_block(m, "alternating", seed=3, iters=10)
    assert cert is not None and verify_zero_block(m, cert).threshold_met


def test_generic_full_rank_has_no_block():
    space = SymbolSpace(tuple(f"a{i}{j}" for i in range(3) for j in range(3)))
    m = sym(space, [[{f"a{i}{j}": 1} for j in range(3)] for i in range(3)])
    assert structural_rank(m) == 3
    assert find_zero_block(m, "exhaustive", 2) is None
    assert mcc_witness(m, 2) is None


def test_block_triangular_invariance(rng):
    for _ in range(5):
        m = planted_instance(rng)
        cert = find_zero_block(m, "exhaustive", 2)
        rows, cols = m.shape
        mp, np_ = cert.m_prime, cert.n_prime
        # L keeps the first m' rows among themselves; R keeps the last n' columns among themselves
        L = random_invertible(rng, rows, 1)
        for i in range(mp):
            for j in range(mp, rows):
                L[i][j] = Fraction(0)
        while det_Q(L) == 0:
            L = random_invertible(rng, rows, 1)
            for i in range(mp):
                for j in range(mp, rows):
                    L[i][j] = Fraction(0)
        R = random_invertible(rng, cols, 1)
        for i in range(cols - np_):
            for j in range(cols - np_, cols):
                R[i][j] = Fraction(0)
        while det_Q(R) == 0:
            R = random_invertible(rng, cols, 1)
            for i in range(cols - np_):
                for j in range(cols - np_, cols):
                    R[i][j] = Fraction(0)
        moved = ZeroBlockCertificate(matmul(L, cert.p), matmul(cert.q, R), mp, np_)
        assert verify_zero_block(m, moved).ok


def test_mcc_example_matrix():
    wit = mcc_witness(EXAMPLE, 1)
    assert wit == MccWitness((0, 1, 0), (1, 0, 0))
    assert check_mcc_witness(EXAMPLE, wit)
    assert not check_mcc_witness(EXAMPLE, MccWitness((1, 0, 0), (1, 0, 0)))
    assert not check_mcc_witness(EXAMPLE, MccWitness((0, 0, 0), (1, 0, 0)))


def test_mcc_few_symbols_always_found(rng):
    for _ in range(25):
        n = rng.randint(2, 4)
        r = rng.randint(1, n - 1)
        space = SymbolSpace(tuple(f"s{k}" for k in range(r)))
        m = random_symbolic(rng, space, n, n)
        wit = mcc_witness(m, 1)
        assert wit is not None and wit.v[0] > 0 and check_mcc_witness(m, wit)
        assert next(x for x in wit.w if x) > 0
        assert gcd(*wit.w) == 1 and gcd(*wit.v) == 1


def test_mcc_needs_square():
    with pytest.raises(ValueError):
        mcc_witness(sym(XYZ, [[{"x": 1}, {"y": 1}]]), 1)


def test_height_vectors():
    vs = list(height_vectors(2, 1))
    assert vs == [(1, 0), (0, 1), (1, -1), (1, 1)]
    assert len(set(height_vectors(3, 2))) == len(list(height_vectors(3, 2)))


def test_six_exponentials_cases():
    rows = sym(XYZ, [[{"x": 1}, {"y": 1}, {"z": 1}], [{"x": 2}, {"y": 2}, {"z": 2}]])
    rep = six_exponentials_check(rows)
    assert rep.case == "rows" and rep.zero_block is not None
    # columns: col2 = col0 + col1 and col0 = 2 col1 (rank one via a common symbol)
    cols = sym(XYZ, [[{"x": 2}, {"x": 1}, {"x": 3}], [{"y": 2}, {"y": 1}, {"y": 3}]])
    rep = six_exponentials_check(cols)
    assert rep.case == "cols" and rep.zero_block is not None
    generic = sym(XYZ, [[{"x": 1}, {"y": 1}, {"z": 1}], [{"y": 1}, {"z": 1}, {"x": 1}]])
    assert six_exponentials_check(generic).case == "hypothesis not met"
    with pytest.raises(ValueError):
        six_exponentials_check(EXAMPLE)
