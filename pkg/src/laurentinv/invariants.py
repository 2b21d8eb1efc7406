"""Discrete invariants of the zero set of a generic consistent system.

Let ``J`` be the essential subcollection of ``A``. For a generic consistent
system the zero set splits into ``ind(J) = [Lambda(J) : G(J)]`` disjoint
pieces. Each piece lives in a translate of a subtorus of dimension
``m = n - dim L(J)`` and is cut out there by generic polynomials whose
Newton polytopes are the projections of the remaining ``Delta_i`` to
Z^n / Lambda(J). Root counts, Euler characteristics and genera are the
classical Newton-polytope answers for one piece, multiplied by ``ind(J)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .collection import IndexSubset, SupportCollection
from .combinatorics import (
    DEFAULT_MAX_SUBSETS,
    DefectReport,
    defect_report,
    essential_subcollection,
    minimal_defect,
)
from .errors import InternalInvariantError, InvalidInputError, PreconditionError
from .geometry import (
    DEFAULT_MAX_LATTICE_POINTS,
    LatticePolytope,
    convex_hull,
    interior_lattice_point_count,
    lattice_volume,
    minkowski_sum,
    project_support,
)
from .lattice import QuotientMap, difference_lattice, lattice_index, quotient_map, saturation


def bkk_number(polytopes: Sequence[LatticePolytope]) -> int:
    """``m!`` times the mixed volume of ``m`` polytopes in R^m.

    Computed by inclusion-exclusion over Minkowski sums of subsets; for
    lattice polytopes this is the generic number of roots in the torus of a
    square system with these Newton polytopes. An empty list gives 1.
    """
    m = len(polytopes)
    for P in polytopes:
        if P.ambient_dim != m:
            raise InvalidInputError(f"bkk_number needs {m} polytopes in R^{m}, got one in R^{P.ambient_dim}")
    if m == 0:
        return 1
    sums: dict[int, LatticePolytope] = {}
    total = Fraction(0)
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        sums[mask] = polytopes[low] if rest == 0 else minkowski_sum(sums[rest], polytopes[low])
        sign = -1 if (m - bin(mask).count("1")) % 2 else 1
        total += sign * lattice_volume(sums[mask])
    if total.denominator != 1:
        # only possible for non-lattice polytopes
        return total
    return int(total)


@dataclass
class ZeroSetStructure:
    """Shape of the zero set of a generic consistent system.

    ``residual_polytopes[j]`` is the projected Newton polytope of support
    ``residual_indices[j]``, in the coordinates of ``quotient``.
    """

    essential: IndexSubset
    num_components: int
    component_ambient_dim: int
    zero_set_dim: int
    residual_indices: IndexSubset
    residual_polytopes: tuple[LatticePolytope, ...]
    quotient: QuotientMap | None = None
    complete_intersection: bool = True


def zero_set_structure(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> ZeroSetStructure:
    J = essential_subcollection(collection, max_subsets)
    d = minimal_defect(collection, max_subsets)
    G = difference_lattice(collection, J)
    L = saturation(G)
    qmap = quotient_map(L)
    rest = collection.complement(J)
    residual = tuple(
        convex_hull(project_support(collection.supports[i], qmap), ambient_dim=qmap.target_dim) for i in rest
    )
    zero_dim = collection.ambient_dim - collection.k - d
    if zero_dim != qmap.target_dim - len(rest):
        raise InternalInvariantError(
            f"zero set dimension {zero_dim} disagrees with {qmap.target_dim} - {len(rest)} from the quotient"
        )
    return ZeroSetStructure(
        essential=J,
        num_components=lattice_index(G, L),
        component_ambient_dim=qmap.target_dim,
        zero_set_dim=zero_dim,
        residual_indices=rest,
        residual_polytopes=residual,
        quotient=qmap,
    )


def _root_count(s: ZeroSetStructure) -> int:
    if s.zero_set_dim != 0:
        raise PreconditionError(
            f"the generic zero set has dimension {s.zero_set_dim}; a root count needs dimension 0"
        )
    return s.num_components * bkk_number(s.residual_polytopes)


def _hypersurface_polytope(s: ZeroSetStructure) -> LatticePolytope:
    if len(s.residual_indices) != 1:
        raise PreconditionError(
            f"needs exactly one support outside the essential subcollection, found {len(s.residual_indices)}"
        )
    if s.component_ambient_dim < 1:
        raise PreconditionError("components live in a zero-dimensional torus")
    return s.residual_polytopes[0]


def _euler_characteristic(s: ZeroSetStructure) -> int:
    Q = _hypersurface_polytope(s)
    m = s.component_ambient_dim
    return (-1) ** (m - 1) * s.num_components * bkk_number([Q] * m)


def _geometric_genus(s: ZeroSetStructure, max_lattice_points: int) -> int:
    Q = _hypersurface_polytope(s)
    if s.zero_set_dim < 1:
        raise PreconditionError("geometric genus needs positive-dimensional components")
    if not Q.is_full_dimensional:
        # each piece is a union of translated subtori times points; genus 0
        return 0
    return s.num_components * interior_lattice_point_count(Q, max_lattice_points)


def root_count(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> int:
    """Number of roots of a generic consistent system with a finite zero set.

    Needs ``n + k`` supports with minimal defect ``-k``. With ``k = 0`` this
    is the BKK count.
    """
    return _root_count(zero_set_structure(collection, max_subsets))


def euler_characteristic(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> int:
    """Euler characteristic when exactly one support lies outside the essential subcollection."""
    return _euler_characteristic(zero_set_structure(collection, max_subsets))


def geometric_genus(
    collection: SupportCollection,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    max_lattice_points: int = DEFAULT_MAX_LATTICE_POINTS,
) -> int:
    """Geometric genus in the same one-equation situation, for positive-dimensional pieces."""
    return _geometric_genus(zero_set_structure(collection, max_subsets), max_lattice_points)


@dataclass
class InvariantReport:
    defect_report: DefectReport
    structure: ZeroSetStructure
    root_count: int | None = None
    euler_characteristic: int | None = None
    geometric_genus: int | None = None
    notes: dict[str, str] = field(default_factory=dict)


def full_report(
    collection: SupportCollection,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    max_lattice_points: int = DEFAULT_MAX_LATTICE_POINTS,
) -> InvariantReport:
    """Every invariant that applies to ``collection``, with a note for each one that does not."""
    report = InvariantReport(defect_report(collection, max_subsets), zero_set_structure(collection, max_subsets))
    s = report.structure
    for name, compute in (
        ("root_count", lambda: _root_count(s)),
        ("euler_characteristic", lambda: _euler_characteristic(s)),
        ("geometric_genus", lambda: _geometric_genus(s, max_lattice_points)),
    ):
        try:
            setattr(report, name, compute())
            report.notes[name] = "computed"
        except PreconditionError as exc:
            report.notes[name] = f"not applicable: {exc}"
    return report
