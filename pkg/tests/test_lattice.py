from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import collections, int_matrices, unimodular
from laurentinv import (
    IntegerMatrix,
    InvalidInputError,
    SublatticeBasis,
    SupportCollection,
    difference_lattice,
    hermite_normal_form,
    lattice_index,
    quotient_map,
    saturation,
    smith_normal_form,
)
from laurentinv.lattice import determinant, invariant_factors, rank, unimodular_inverse
from laurentinv.oracles import index_by_fundamental_domain, rational_rank


def M(rows):
    return IntegerMatrix.from_rows(rows)


def is_hnf(H):
    last = -1
    seen_zero = False
    for row in H.rows:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        assert not seen_zero, "zero row above a nonzero row"
        p = nz[0]
        assert p > last and row[p] > 0
        last = p
    return True


# -- matrices ------------------------------------------------------------------------


def test_matrix_basics():
    A = M([[1, 2], [3, 4]])
    assert A.shape == (2, 2)
    assert (A @ IntegerMatrix.identity(2)) == A
    assert A.transpose().tolist() == [[1, 3], [2, 4]]
    assert A.apply([1, 1]) == (3, 7)
    assert determinant(A) == -2


def test_ragged_matrix_rejected():
    with pytest.raises(InvalidInputError):
        IntegerMatrix.from_rows([[1, 2], [3]])


def test_hnf_examples():
    H, U = hermite_normal_form(M([[2, 0], [0, 3]]))
    assert H.tolist() == [[2, 0], [0, 3]]
    assert U == IntegerMatrix.identity(2)
    H, _ = hermite_normal_form(M([[0, 1], [1, 0]]))
    assert H.tolist() == [[1, 0], [0, 1]]


def test_hnf_same_row_space():
    A = M([[2, 4], [1, 3]])
    H, _ = hermite_normal_form(A)
    LA = SublatticeBasis.from_generators(2, A.rows)
    LH = SublatticeBasis.from_generators(2, H.rows)
    assert all(r in LA for r in H.rows) and all(r in LH for r in A.rows)


def test_snf_examples():
    D, _, _ = smith_normal_form(M([[2, 0], [0, 3]]))
    assert D.tolist() == [[1, 0], [0, 6]]
    D, _, _ = smith_normal_form(IntegerMatrix.identity(3))
    assert D == IntegerMatrix.identity(3)
    D, _, _ = smith_normal_form(M([[2, 2], [0, 4]]))
    assert D[0, 0] * D[1, 1] == 8
    assert D.tolist() == [[2, 0], [0, 4]]


@given(int_matrices())
def test_hnf_properties(rows):
    A = M(rows)
    H, U = hermite_normal_form(A)
    assert abs(determinant(U)) == 1
    assert U @ A == H
    assert is_hnf(H)
    for i, row in enumerate(H.rows):
        p = next((j for j, x in enumerate(row) if x), None)
        if p is not None:
            assert all(0 <= H[a, p] < row[p] for a in range(i))
    assert hermite_normal_form(H)[0] == H


def _minor_gcd(rows, r):
    g = 0
    for ri in combinations(range(len(rows)), r):
        for ci in combinations(range(len(rows[0])), r):
            g = gcd(g, determinant(M([[rows[i][j] for j in ci] for i in ri])))
    return g


@given(int_matrices(max_rows=4, max_cols=4))
def test_snf_properties(rows):
    A = M(rows)
    D, U, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    d = invariant_factors(A)
    r = rank(rows)
    assert len(d) == r
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    for i in range(D.nrows):
        for j in range(D.ncols):
            if i != j:
                assert D[i, j] == 0
    if r:
        prod = 1
        for x in d:
            prod *= x
        assert prod == _minor_gcd(rows, r)


@given(int_matrices())
def test_rank_matches_rational_rank(rows):
    assert rank(rows) == rational_rank(rows, len(rows[0]))


# -- sublattices ---------------------------------------------------------------------


def test_difference_lattice_examples():
    A = SupportCollection.from_points([[(0,), (2,)]])
    assert difference_lattice(A, [0]).basis.tolist() == [[2]]
    sq = SupportCollection.from_points([[(0, 0), (1, 0), (0, 1), (1, 1)]])
    assert difference_lattice(sq, [0]).basis == IntegerMatrix.identity(2)
    assert difference_lattice(sq, []).rank == 0


def test_saturation_examples():
    assert saturation(SublatticeBasis.from_generators(2, [(2, 0)])).basis.tolist() == [[1, 0]]
    assert saturation(SublatticeBasis.from_generators(2, [(2, 2)])).basis.tolist() == [[1, 1]]
    assert saturation(SublatticeBasis.full(2)) == SublatticeBasis.full(2)


def test_index_examples():
    G = SublatticeBasis.from_generators(1, [(2,)])
    assert lattice_index(G, SublatticeBasis.full(1)) == 2
    assert lattice_index(G, G) == 1
    G = SublatticeBasis.from_generators(2, [(2, 0), (0, 3)])
    assert lattice_index(G, SublatticeBasis.full(2)) == 6
    assert index_by_fundamental_domain(G, SublatticeBasis.full(2)) == 6


def test_index_requires_containment():
    G = SublatticeBasis.from_generators(2, [(1, 0)])
    L = SublatticeBasis.from_generators(2, [(0, 1)])
    with pytest.raises(InvalidInputError):
        lattice_index(G, L)


def test_coordinates():
    L = SublatticeBasis.from_generators(2, [(2, 0), (0, 3)])
    assert L.coordinates((4, 3)) == (Fraction(2), Fraction(1))
    assert (1, 0) not in L
    assert L.coordinates((1, 1)) is not None


@given(int_matrices(max_rows=4, max_cols=5))
def test_saturation_properties(rows):
    n = len(rows[0])
    G = SublatticeBasis.from_generators(n, rows)
    L = saturation(G)
    assert saturation(L) == L
    assert L.is_saturated() and L.contains_lattice(G)
    assert L.rank == G.rank
    prod = 1
    for x in invariant_factors(G.basis):
        prod *= x
    assert lattice_index(G, L) == prod


@given(collections())
def test_difference_lattice_anchor_independent(A):
    for i, s in enumerate(A.supports):
        base = difference_lattice(A, [i])
        for anchor in s:
            other = SublatticeBasis.from_generators(A.ambient_dim, [tuple(x - y for x, y in zip(p, anchor)) for p in s])
            assert other == base


# -- quotient maps -------------------------------------------------------------------


def test_quotient_examples():
    q = quotient_map(SublatticeBasis.from_generators(2, [(1, 0)]))
    assert q.target_dim == 1 and q.project((1, 0)) == (0,)
    assert abs(q.project((0, 1))[0]) == 1
    assert quotient_map(SublatticeBasis.from_generators(3, [])).matrix == IntegerMatrix.identity(3)
    q = quotient_map(SublatticeBasis.full(3))
    assert q.target_dim == 0 and q.project((1, 2, 3)) == ()


def test_quotient_needs_saturated():
    with pytest.raises(InvalidInputError):
        quotient_map(SublatticeBasis.from_generators(1, [(2,)]))


@given(int_matrices(max_rows=4, max_cols=5))
def test_quotient_map_certificate(rows):
    n = len(rows[0])
    L = saturation(SublatticeBasis.from_generators(n, rows))
    q = quotient_map(L)
    assert q.target_dim == n - L.rank
    for b in L.basis.rows:
        assert q.project(b) == (0,) * q.target_dim
    if q.target_dim:
        D, _, _ = smith_normal_form(q.matrix)
        expect = [[int(i == j) for j in range(n)] for i in range(q.target_dim)]
        assert D.tolist() == expect


@given(st.integers(1, 5).flatmap(unimodular))
def test_unimodular_inverse(U):
    n = U.nrows
    assert U @ unimodular_inverse(U) == IntegerMatrix.identity(n)
