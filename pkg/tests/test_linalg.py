from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidmlt.linalg import (
    PRIMES,
    RationalMatrix,
    integer_kernel,
    integer_rank,
    inverse,
    is_prime,
    kernel_rational,
    rank_mod_p,
    symmetric_inertia,
)

from oracles import eig_inertia, sympy_nullity, sympy_rank

small_ints = st.integers(-6, 6)


@st.composite
def int_matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [draw(st.lists(small_ints, min_size=c, max_size=c)) for _ in range(r)]


@st.composite
def low_rank_matrices(draw):
    """Products of thin factors, so rank deficiency is common."""
    r, c, k = draw(st.integers(1, 6)), draw(st.integers(1, 6)), draw(st.integers(0, 4))
    a = [draw(st.lists(small_ints, min_size=k, max_size=k)) for _ in range(r)]
    b = [draw(st.lists(small_ints, min_size=c, max_size=c)) for _ in range(k)]
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(c)] for i in range(r)]


def test_primes_are_prime():
    assert all(is_prime(p) for p in PRIMES)
    assert PRIMES[0] == 2 ** 61 - 1
    assert not is_prime(2 ** 61 + 1)
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_rank_mod_p_examples():
    eye = [[int(i == j) for j in range(5)] for i in range(5)]
    assert rank_mod_p(eye, PRIMES[0]) == 5
    assert rank_mod_p([[0] * 4] * 3, PRIMES[0]) == 0
    assert rank_mod_p([[2, 0], [0, 3]], 3) == 1
    with pytest.raises(ValueError):
        rank_mod_p(eye, 15)


@given(st.one_of(int_matrices(), low_rank_matrices()))
def test_ranks_match_sympy(m):
    exact = sympy_rank(m)
    assert integer_rank(m, len(m[0])) == exact
    assert RationalMatrix(m).rank() == exact
    for p in PRIMES:
        assert rank_mod_p(m, p) <= exact
    assert max(rank_mod_p(m, p) for p in PRIMES) == exact


def test_random_6x4_mod_p_agrees():
    rng = random.Random(3)
    for _ in range(50):
        m = [[rng.randint(-2 ** 31, 2 ** 31) for _ in range(4)] for _ in range(6)]
        assert rank_mod_p(m, PRIMES[1]) == sympy_rank(m)


def test_kernel_examples():
    assert kernel_rational(RationalMatrix.identity(4)) == []
    (v,) = kernel_rational(RationalMatrix([[1, -1]]))
    assert v[0] == v[1] != 0


@given(st.one_of(int_matrices(), low_rank_matrices()))
def test_kernel_is_exact_and_full(m):
    ncols = len(m[0])
    basis = kernel_rational(RationalMatrix(m))
    for v in basis:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in m)
    assert len(basis) == ncols - sympy_rank(m) == sympy_nullity(m, ncols)
    if basis:
        assert RationalMatrix(basis).rank() == len(basis)
    ib = integer_kernel(m, ncols)
    assert len(ib) == len(basis)
    for v in ib:
        assert all(isinstance(x, int) for x in v)
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_rational_matrix_ops():
    a = RationalMatrix([[1, 2], [3, 4]])
    assert a.T.T == a
    assert (a @ RationalMatrix.identity(2)) == a
    assert a @ [1, 1] == (3, 7)
    assert (a + (-a)).is_zero()
    assert inverse(a) @ a == RationalMatrix.identity(2)
    with pytest.raises(ZeroDivisionError):
        inverse(RationalMatrix([[1, 2], [2, 4]]))
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2], [3]])


def test_inertia_examples():
    d = symmetric_inertia(RationalMatrix([[2, 0, 0], [0, 3, 0], [0, 0, 0]]))
    assert (d.rank, d.psd) == (2, True)
    d = symmetric_inertia(RationalMatrix([[1, 0], [0, -1]]))
    assert not d.psd and d.signature == (1, 1, 0)
    d = symmetric_inertia(RationalMatrix([[0, 1], [1, 0]]))
    assert not d.psd and (d.n_plus, d.n_minus) == (1, 1)
    with pytest.raises(ValueError):
        symmetric_inertia(RationalMatrix([[0, 1], [2, 0]]))


@st.composite
def symmetric_matrices(draw):
    n = draw(st.integers(1, 6))
    vals = {}
    for i in range(n):
        for j in range(i, n):
            vals[i, j] = draw(small_ints)
    # sprinkle zero diagonals to exercise 2x2 pivots
    if draw(st.booleans()):
        for i in range(n):
            vals[i, i] = 0
    return [[vals[min(i, j), max(i, j)] for j in range(n)] for i in range(n)]


@settings(max_examples=200)
@given(symmetric_matrices())
def test_inertia_matches_eigenvalues(m):
    d = symmetric_inertia(RationalMatrix(m))
    assert (d.n_plus, d.n_minus, d.n_zero) == eig_inertia(m)
    assert d.n_plus + d.n_minus + d.n_zero == len(m)
    assert d.rank == d.n_plus + d.n_minus == sympy_rank(m)
    assert d.psd == (d.n_minus == 0)


@given(int_matrices())
def test_gram_matrices_are_psd(a):
    at = RationalMatrix(a).T
    g = at @ RationalMatrix(a)
    assert symmetric_inertia(g).psd
    assert symmetric_inertia(-g).n_plus == 0
