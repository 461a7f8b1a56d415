import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logrank.intlattice import (SiegelPreconditionError, canonical_basis, det_int, hnf, hnf_snf,
                                image_count, integer_kernel, lattice_contains, lattice_equal,
                                lll, siegel_pigeonhole, siegel_solve, size_reduce, snf,
                                verify_siegel)
from logrank.linalg import matmul

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_hnf_properties(a):
    H, U = hnf(a)
    assert matmul(U, a) == H
    assert abs(det_int(U)) == 1
    col = -1
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        assert nz[0] > col and row[nz[0]] > 0
        col = nz[0]


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_snf_properties(a):
    D, U, V = snf(a)
    assert matmul(matmul(U, a), V) == D
    assert abs(det_int(U)) == 1 and abs(det_int(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert diag[len(nonzero):] == [0] * (len(diag) - len(nonzero))


def test_snf_examples():
    assert hnf_snf([[2, 0], [0, 4]]).invariants == [2, 4]
    assert hnf_snf([[2, 0], [0, 3]]).invariants == [1, 6]
    D, U, V = snf([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]] and U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]


def test_snf_matches_brute_force_unimodular_search():
    # invariants of a 2x2 matrix: d1 = gcd of entries, d1*d2 = |det|
    import math
    for a in ([[2, 0], [0, 3]], [[4, 6], [2, 8]], [[3, 9], [6, 3]]):
        g = math.gcd(*[x for row in a for x in row])
        assert hnf_snf(a).invariants == [g, abs(det_int(a)) // g]


def test_integer_kernel():
    assert integer_kernel([[2, 3]]) == [(3, -2)]
    ker = integer_kernel([[1, 1, 1], [1, 2, 3]])
    assert ker == [(1, -2, 1)]
    assert integer_kernel([[1, 0], [0, 1]]) == []


def test_size_reduce_and_lll():
    assert size_reduce([(1, 0), (0, 1)]) == [(1, 0), (0, 1)]
    red = size_reduce([(5, 4), (0, 1)])
    assert lattice_equal(red, [(5, 4), (0, 1)])
    assert max(sum(x * x for x in v) for v in red) < 41
    basis = [(1, 0, 0), (7, 1, 0), (11, 3, 1)]
    for out in (size_reduce(basis), lll(basis)):
        assert lattice_equal(out, basis)
        assert all(lattice_contains(out, v) for v in basis)
    assert sorted(sum(x * x for x in v) for v in lll(basis)) == [1, 1, 1]


def test_siegel_examples():
    b = siegel_solve([[1, -1, 0]], 2)
    assert verify_siegel([[1, -1, 0]], 2, b) and max(map(abs, b)) == 1
    assert siegel_solve([[1, 2, -3]], 4) == (1, 1, 1)
    with pytest.raises(SiegelPreconditionError):
        siegel_solve([[1, 2]], 3)
    with pytest.raises(SiegelPreconditionError):
        siegel_solve([[1, 5, 1]], 3)


def test_siegel_random(rng):
    for _ in range(100):
        m = rng.randint(1, 5)
        n = rng.randint(2 * m + 1, 12)
        h = rng.randint(1, 10)
        a = [[rng.randint(-h + 1, h - 1) for _ in range(n)] for _ in range(m)]
        assert verify_siegel(a, h, siegel_solve(a, h))


def test_pigeonhole_oracle_small():
    a = [[1, 1, -1]]
    b = siegel_pigeonhole(a, 2)
    assert verify_siegel(a, 2, b)


def _enumerate_quotient(gens, m, t):
    """Box points modulo the lattice, by canonical coset representatives."""
    reps = set()
    for pt in itertools.product(range(t + 1), repeat=m):
        # two points are equal mod H iff their difference is in H
        found = False
        for r in reps:
            if lattice_contains(gens, [a - b for a, b in zip(pt, r)]):
                found = True
                break
        if not found:
            reps.add(pt)
    return len(reps)


def test_image_count_examples():
    assert image_count([(1, 0)], 2, 1) == 2
    assert image_count([(1, 1)], 2, 2) == _enumerate_quotient([(1, 1)], 2, 2) == 5
    with pytest.raises(ValueError):
        image_count([(1, 1), (2, 2)], 2, 1)


def test_image_count_against_enumeration(rng):
    for _ in range(15):
        g = [tuple(rng.randint(-2, 2) for _ in range(3))]
        if not any(g[0]):
            continue
        c = image_count(g, 3, 2)
        assert c == _enumerate_quotient(g, 3, 2)
        assert c >= 9


def test_canonical_basis_is_order_independent():
    a = canonical_basis([(1, 2, 3), (0, 1, 1)])
    b = canonical_basis([(1, 3, 4), (0, -1, -1)])
    assert a == b


def test_siegel_falls_back_to_box_search(monkeypatch):
    import logrank.intlattice as il

    # inflate the reduced basis so the kernel route cannot meet the bound
    monkeypatch.setattr(il, "size_reduce", lambda basis: [tuple(50 * x for x in v) for v in basis])
    a = [[1, 1, -1]]
    b = il.siegel_solve(a, 2)
    assert verify_siegel(a, 2, b)
    with pytest.raises(il.SiegelSearchError):
        il.siegel_solve(a, 2, max_points=2)
