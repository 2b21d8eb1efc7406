import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import collections, polytopes
from laurentinv import (
    CapExceededError,
    PreconditionError,
    SupportCollection,
    bkk_number,
    convex_hull,
    euler_characteristic,
    full_report,
    geometric_genus,
    lattice_volume,
    root_count,
    zero_set_structure,
)
from laurentinv.oracles import mixed_volume_by_interpolation

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
RESULTANT = SupportCollection.from_points([[(0,), (2,)], [(1,), (3,)]])
SQUARES = SupportCollection.from_points([SQUARE, SQUARE])
THREE_IN_PLANE = SupportCollection.from_points([[(0, 0), (1, 0)], [(0, 0), (2, 0)], [(0, 0), (0, 1)]])
Z_AXIS = [[(0, 0, 0), (0, 0, 2)], [(0, 0, 1), (0, 0, 3)]]
BILINEAR = SupportCollection.from_points([[(x, y, 0) for x, y in SQUARE]] + Z_AXIS)
CUBIC = SupportCollection.from_points([[(0, 0, 0), (3, 0, 0), (0, 3, 0)]] + Z_AXIS)


def seg(*v):
    return convex_hull([(0,) * len(v), v])


# -- bkk_number ----------------------------------------------------------------------


def test_bkk_examples():
    assert bkk_number([seg(1, 0), seg(0, 1)]) == 1
    sq = convex_hull(SQUARE)
    assert bkk_number([sq, sq]) == 2
    tri = convex_hull([(0, 0), (1, 0), (0, 1)])
    assert bkk_number([tri, tri]) == 1
    assert bkk_number([]) == 1


def test_interpolation_examples():
    sq = convex_hull(SQUARE)
    tri = convex_hull([(0, 0), (1, 0), (0, 1)])
    assert mixed_volume_by_interpolation([seg(1, 0), seg(0, 1)]) == 1
    assert mixed_volume_by_interpolation([sq, sq]) == 2
    assert mixed_volume_by_interpolation([tri, tri]) == 1


@given(st.integers(1, 3).flatmap(lambda m: st.lists(polytopes(m=m), min_size=m, max_size=m)), st.randoms())
def test_bkk_symmetric(Ps, rnd):
    perm = list(Ps)
    rnd.shuffle(perm)
    assert bkk_number(perm) == bkk_number(Ps)


@given(st.integers(1, 2).flatmap(lambda m: st.lists(polytopes(m=m), min_size=m + 1, max_size=m + 1)))
def test_bkk_multilinear(Ps):
    P, P2, *rest = Ps
    assert bkk_number([P + P2] + rest) == bkk_number([P] + rest) + bkk_number([P2] + rest)


@given(polytopes())
def test_bkk_diagonal(P):
    m = P.ambient_dim
    assert bkk_number([P] * m) == math.factorial(m) * lattice_volume(P)


@given(st.integers(1, 3).flatmap(lambda m: st.lists(polytopes(m=m, max_points=4), min_size=m, max_size=m)))
def test_bkk_matches_interpolation(Ps):
    assert bkk_number(Ps) == mixed_volume_by_interpolation(Ps)


# -- worked examples -----------------------------------------------------------------


def test_root_count_examples():
    assert root_count(RESULTANT) == 2
    assert root_count(SQUARES) == 2
    assert root_count(THREE_IN_PLANE) == 1


def test_euler_examples():
    assert euler_characteristic(SupportCollection.from_points([SQUARE])) == -2
    assert euler_characteristic(BILINEAR) == -4
    assert euler_characteristic(SupportCollection.from_points([[(0,), (1,)]])) == 1


def test_genus_examples():
    assert geometric_genus(SupportCollection.from_points([[(0, 0), (3, 0), (0, 3)]])) == 1
    assert geometric_genus(BILINEAR) == 0
    assert geometric_genus(CUBIC) == 2


def test_structure_examples():
    s = zero_set_structure(RESULTANT)
    assert (s.num_components, s.component_ambient_dim, s.zero_set_dim) == (2, 0, 0)
    assert s.residual_polytopes == ()
    s = zero_set_structure(BILINEAR)
    assert s.essential == (1, 2)
    assert (s.num_components, s.component_ambient_dim, s.zero_set_dim) == (2, 2, 1)
    (Q,) = s.residual_polytopes
    assert len(Q.vertices) == 4 and lattice_volume(Q) == 1
    s = zero_set_structure(SQUARES)
    assert s.essential == () and s.num_components == 1
    assert s.zero_set_dim == 0 and len(s.residual_polytopes) == 2
    assert s.complete_intersection


def test_preconditions():
    with pytest.raises(PreconditionError):
        root_count(BILINEAR)
    with pytest.raises(PreconditionError):
        euler_characteristic(RESULTANT)
    with pytest.raises(PreconditionError):
        geometric_genus(SupportCollection.from_points([[(0,), (1,)]]))


def test_non_full_dimensional_hypersurface_genus():
    # a single segment in the plane: union of translated subtori
    A = SupportCollection.from_points([[(0, 0), (2, 0)]])
    assert geometric_genus(A) == 0
    assert euler_characteristic(A) == 0


def test_full_report_notes():
    r = full_report(BILINEAR)
    assert r.root_count is None and r.notes["root_count"].startswith("not applicable")
    assert (r.euler_characteristic, r.geometric_genus) == (-4, 0)
    assert r.notes["geometric_genus"] == "computed"
    r = full_report(RESULTANT)
    assert r.root_count == 2 and r.euler_characteristic is None


def test_full_report_cap():
    with pytest.raises(CapExceededError):
        full_report(BILINEAR, max_subsets=4)


# -- properties ----------------------------------------------------------------------


@given(collections())
def test_dimension_bookkeeping(A):
    r = full_report(A)
    d = r.defect_report
    assert r.structure.zero_set_dim == d.incidence_dim - (d.omega_dim - d.consistency_codim)
    assert r.structure.zero_set_dim == d.generic_zero_set_dim
    assert r.structure.num_components >= 1


@given(collections(max_dim=3, max_supports=4))
def test_root_count_is_zero_dim_only(A):
    r = full_report(A, max_lattice_points=10**5)
    assert (r.root_count is not None) == (r.structure.zero_set_dim == 0)


def test_root_count_degenerates_to_index():
    # whole collection essential: x^3 = c has three roots
    A = SupportCollection.from_points([[(0,), (3,)], [(0,), (3,)]])
    s = zero_set_structure(A)
    assert s.residual_polytopes == () and s.num_components == 3
    assert root_count(A) == 3


def test_all_examples_agree_with_oracle_on_residuals():
    for A in (SQUARES, THREE_IN_PLANE):
        s = zero_set_structure(A)
        assert bkk_number(s.residual_polytopes) == mixed_volume_by_interpolation(list(s.residual_polytopes))


def test_k_zero_bkk_case():
    tri = [(0, 0), (1, 0), (0, 1)]
    A = SupportCollection.from_points([tri, tri])
    assert root_count(A) == 1
    for P in itertools.permutations([SQUARE, tri]):
        assert root_count(SupportCollection.from_points(list(P))) == 2
