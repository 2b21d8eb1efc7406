import itertools
import warnings

import pytest
from hypothesis import assume, given

from conftest import collections
from laurentinv import (
    CapExceededError,
    InvalidInputError,
    PreconditionError,
    SupportCollection,
    consistency_codimension,
    consistent_core,
    defect,
    defect_of_projected_complement,
    defect_report,
    direction_space_dim,
    essential_subcollection,
    is_generically_consistent,
    minimal_defect,
)
from laurentinv.collection import DuplicatePointWarning
from laurentinv.combinatorics import REPORT_TABLE_MAX_K, minimal_achievers, project_collection
from laurentinv.oracles import exhaustive_essential

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
RESULTANT = SupportCollection.from_points([[(0,), (2,)], [(1,), (3,)]])
SQUARES = SupportCollection.from_points([SQUARE, SQUARE])
SEGMENTS3 = SupportCollection.from_points([[(0, 0), (1, 0)]] * 3)
EMBEDDED = SupportCollection.from_points([[(0, 0), (2, 0)], [(1, 0), (3, 0)], [(0, 0), (0, 1)]])


def subsets(k):
    for r in range(k + 1):
        yield from itertools.combinations(range(k), r)


# -- collections ---------------------------------------------------------------------


def test_collection_normalizes():
    A = SupportCollection.from_points([[(1, 0), (0, 0)]])
    assert A.supports == (((0, 0), (1, 0)),)
    assert A.k == 1 and A.omega_dim == 2


def test_duplicate_points_warn():
    with pytest.warns(DuplicatePointWarning):
        A = SupportCollection.from_points([[(0, 0), (0, 0), (1, 0)]])
    assert len(A.supports[0]) == 2


@pytest.mark.parametrize(
    "supports",
    [
        [[]],
        [],
        [[(0, 0), (1,)]],
        [[(0.5, 0)]],
        [[(True, 0)]],
    ],
)
def test_bad_collections(supports):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(InvalidInputError):
            SupportCollection.from_points(supports)


def test_subset_checks():
    with pytest.raises(IndexError):
        RESULTANT.check_subset([2])
    assert RESULTANT.complement([1]) == (0,)


# -- defects -------------------------------------------------------------------------


def test_direction_space_examples():
    assert direction_space_dim(SupportCollection.from_points([[(0, 0), (1, 0), (0, 1)]]), [0]) == 2
    assert direction_space_dim(SupportCollection.from_points([[(3, 5)]]), [0]) == 0
    assert direction_space_dim(RESULTANT, [0, 1]) == 1


def test_defect_examples():
    assert defect(RESULTANT, []) == 0
    assert defect(SupportCollection.from_points([[(3, 5)]]), [0]) == -1
    assert defect(RESULTANT, [0, 1]) == -1


def test_minimal_defect_examples():
    assert minimal_defect(SQUARES) == 0
    assert minimal_defect(RESULTANT) == -1
    assert minimal_defect(SEGMENTS3) == -2


def test_essential_examples():
    assert essential_subcollection(SQUARES) == ()
    assert essential_subcollection(EMBEDDED) == (0, 1)
    assert essential_subcollection(SEGMENTS3) == (0, 1, 2)
    for A in (SQUARES, EMBEDDED, SEGMENTS3):
        assert exhaustive_essential(A) == (minimal_defect(A), essential_subcollection(A))


def test_consistency_examples():
    assert is_generically_consistent(SQUARES)
    assert not is_generically_consistent(SupportCollection.from_points([[(0, 0)]]))
    assert not is_generically_consistent(RESULTANT)
    assert consistency_codimension(SQUARES) == 0
    assert consistency_codimension(RESULTANT) == 1
    assert consistency_codimension(SEGMENTS3) == 2


def test_projected_complement_examples():
    assert defect_of_projected_complement(EMBEDDED, []) == defect(EMBEDDED, range(3))
    assert defect_of_projected_complement(EMBEDDED, range(3)) == 0
    assert defect_of_projected_complement(EMBEDDED, (0, 1)) == 0


def test_consistent_core_examples():
    core = consistent_core(RESULTANT)
    assert core in {(0,), (1,)}
    assert minimal_defect(RESULTANT.restrict(core)) == 0
    line = SupportCollection.from_points([[(0,), (1,)]] * 3)
    core = consistent_core(line)
    assert len(core) == 1
    with pytest.raises(PreconditionError):
        consistent_core(SQUARES)


def test_cap():
    with pytest.raises(CapExceededError):
        minimal_defect(SEGMENTS3, max_subsets=4)
    assert minimal_defect(SEGMENTS3, max_subsets=8) == -2


def test_report_fields():
    r = defect_report(RESULTANT)
    assert r.minimal_defect == -1 and r.essential == (0, 1)
    assert not r.generically_consistent and r.consistency_codim == 1
    assert r.omega_dim == 4 and r.incidence_dim == 1 + 4 - 2
    assert r.generic_zero_set_dim == 0
    assert r.full_table and len(r.defect_by_subset) == 4


def test_report_table_truncated_for_large_k():
    k = REPORT_TABLE_MAX_K + 1
    A = SupportCollection.from_points([[(0,), (1,)]] * k)
    r = defect_report(A)
    assert not r.full_table
    assert set(r.defect_by_subset) <= {()} | {(i,) for i in range(k)}
    assert all((i,) in r.defect_by_subset for i in range(k))
    assert r.minimal_defect == 1 - k


# -- properties ----------------------------------------------------------------------


@given(collections())
def test_intersection_inequality_and_subadditivity(A):
    for I in subsets(A.k):
        for J in subsets(A.k):
            U = tuple(sorted(set(I) | set(J)))
            K = tuple(sorted(set(I) & set(J)))
            assert defect(A, U) <= defect(A, I) + defect(A, J) - defect(A, K)
            if not K:
                assert defect(A, U) <= defect(A, I) + defect(A, J)


@given(collections())
def test_compdef_identity(A):
    full = tuple(range(A.k))
    for J in subsets(A.k):
        assert defect(A, full) == defect(A, J) + defect_of_projected_complement(A, J)


@given(collections())
def test_compdef_essential_complement(A):
    J = essential_subcollection(A)
    rest = A.complement(J)
    if rest:
        _, projected = project_collection(A, J)
        assert minimal_defect(projected) == 0


@given(collections())
def test_unique_minimal_achiever(A):
    achievers = minimal_achievers(A)
    assert len(achievers) == 1
    assert exhaustive_essential(A) == (minimal_defect(A), essential_subcollection(A))


@given(collections())
def test_removing_one_support_raises_defect_by_one(A):
    assume(minimal_defect(A) < 0)
    E = A.restrict(essential_subcollection(A))
    d = minimal_defect(E)
    for i in range(E.k):
        rest = E.restrict([j for j in range(E.k) if j != i])
        assert defect(rest, range(rest.k)) == minimal_defect(rest) == d + 1


@given(collections())
def test_bernstein_sturmfels(A):
    d = minimal_defect(A)
    assert is_generically_consistent(A) == (d >= 0) == (consistency_codimension(A) == 0)
    assert consistency_codimension(A) == max(0, -d)


@given(collections())
def test_consistent_core_reaches_defect_zero(A):
    J = essential_subcollection(A)
    assume(J)
    E = A.restrict(J)
    assume(direction_space_dim(E, range(E.k)) == A.ambient_dim)
    core = consistent_core(E)
    assert len(core) == A.ambient_dim
    assert minimal_defect(E.restrict(core)) == 0
