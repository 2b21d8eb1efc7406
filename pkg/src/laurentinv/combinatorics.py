"""Defects of subcollections, the minimal defect and the essential subcollection.

For a subcollection ``J`` of supports, ``L(J)`` is the linear space parallel
to the affine hull of the Minkowski sum of the supports in ``J``. Its defect
is ``dim L(J) - |J|``; the empty subcollection has defect 0. A generic system
with the given supports has a common root in the torus iff no subcollection
has negative defect, and otherwise the consistent systems form a subvariety
of codimension ``-d(A)``, where ``d(A)`` is the minimal defect.

Subcollections are enumerated exhaustively over bitmasks; ``max_subsets``
bounds ``2**k``.
"""

from __future__ import annotations

import logging
from array import array
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .collection import IndexSubset, SupportCollection
from .errors import CapExceededError, InternalInvariantError, PreconditionError
from .lattice import EchelonBasis, quotient_map, saturation, difference_lattice

logger = logging.getLogger(__name__)

DEFAULT_MAX_SUBSETS = 2**24
# full per-subset tables are only reported up to this many supports
REPORT_TABLE_MAX_K = 16


def _support_differences(pts) -> list[tuple[int, ...]]:
    anchor = pts[0]
    return [tuple(a - b for a, b in zip(p, anchor)) for p in pts[1:]]


def direction_space_dim(collection: SupportCollection, J: Iterable[int]) -> int:
    """``dim L(J)``: rank of all within-support differences over ``J``."""
    basis = EchelonBasis()
    for i in collection.check_subset(J):
        for v in _support_differences(collection.supports[i]):
            basis.add(v)
    return len(basis)


def defect(collection: SupportCollection, J: Iterable[int]) -> int:
    J = collection.check_subset(J)
    return direction_space_dim(collection, J) - len(J)



def _unmask(mask: int) -> IndexSubset:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _check_cap(collection: SupportCollection, max_subsets: int):
    if 2**collection.k > max_subsets:
        raise CapExceededError(
            f"{collection.k} supports need {2**collection.k} subsets, cap is {max_subsets}"
        )


@lru_cache(maxsize=128)
def _defect_array(collection: SupportCollection) -> array:
    """Defect of every bitmask subcollection, by depth-first extension of echelon bases."""
    k = collection.k
    per_support = [_support_differences(s) for s in collection.supports]
    table = array("i", bytes(4 * (1 << k)))
    # stack of (next index to decide, mask so far, size of mask, basis)
    stack = [(0, 0, 0, EchelonBasis())]
    while stack:
        i, mask, size, basis = stack.pop()
        if i == k:
            table[mask] = len(basis) - size
            continue
        stack.append((i + 1, mask, size, basis))
        if per_support[i]:
            grown = basis.copy()
            for v in per_support[i]:
                grown.add(v)
        else:
            grown = basis
        stack.append((i + 1, mask | 1 << i, size + 1, grown))
    return table


def defect_table(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> array:
    """Defect of every subcollection, indexed by bitmask (bit ``i`` set means ``A_i`` included)."""
    _check_cap(collection, max_subsets)
    return _defect_array(collection)


def minimal_defect(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> int:
    return min(defect_table(collection, max_subsets))


def minimal_achievers(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> list[IndexSubset]:
    """All inclusion-minimal subcollections attaining the minimal defect."""
    table = defect_table(collection, max_subsets)
    d = min(table)
    achievers = sorted((m for m, v in enumerate(table) if v == d), key=lambda m: (bin(m).count("1"), m))
    minimal: list[int] = []
    for m in achievers:
        # any non-minimal achiever contains a minimal one seen earlier
        if not any(q & m == q for q in minimal):
            minimal.append(m)
    return [_unmask(m) for m in minimal]


def essential_subcollection(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> IndexSubset:
    """The unique inclusion-minimal subcollection of minimal defect (empty when ``d(A) = 0``).

    Raises
    ------
    InternalInvariantError
        If two different minimal achievers are found, which is impossible
        for a correct defect table.
    """
    if minimal_defect(collection, max_subsets) == 0:
        return ()
    found = minimal_achievers(collection, max_subsets)
    if len(found) != 1:
        raise InternalInvariantError(f"essential subcollection is not unique: {found}")
    return found[0]


def is_generically_consistent(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> bool:
    return minimal_defect(collection, max_subsets) >= 0


def consistency_codimension(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> int:
    """Codimension of the set of consistent systems in the coefficient space."""
    return max(0, -minimal_defect(collection, max_subsets))


def project_collection(collection: SupportCollection, J: Iterable[int]):
    """Project the supports outside ``J`` to Z^n / Lambda(J).

    Returns ``(qmap, projected)`` where ``projected`` is a collection in the
    quotient lattice, ordered like the complement of ``J``.
    """
    J = collection.check_subset(J)
    qmap = quotient_map(saturation(difference_lattice(collection, J)))
    rest = collection.complement(J)
    pts = [sorted({qmap.project(p) for p in collection.supports[i]}) for i in rest]
    return qmap, SupportCollection(qmap.target_dim, tuple(tuple(s) for s in pts))


def defect_of_projected_complement(collection: SupportCollection, J: Iterable[int]) -> int:
    """Defect of the complement of ``J`` after projecting along ``L(J)``.

    Always satisfies ``defect(A, all) == defect(A, J) + result``.
    """
    _, projected = project_collection(collection, J)
    return defect(projected, range(projected.k))


def consistent_core(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> IndexSubset:
    """A subcollection of size ``n`` and minimal defect 0 inside an essential collection.

    The collection must itself be essential (its essential subcollection is
    everything, with negative defect) and span the ambient space. Supports
    are removed one at a time, each time taking the smallest index of the
    current essential subcollection; every removal raises the minimal defect
    by exactly one.
    """
    k, n = collection.k, collection.ambient_dim
    everything = tuple(range(k))
    d = minimal_defect(collection, max_subsets)
    if d >= 0 or essential_subcollection(collection, max_subsets) != everything:
        raise PreconditionError("consistent_core needs a collection that is essential as a whole")
    if direction_space_dim(collection, everything) != n:
        raise PreconditionError("consistent_core needs the supports to span the ambient lattice")
    current = list(everything)
    while True:
        sub = collection.restrict(current)
        d_sub = minimal_defect(sub, max_subsets)
        if d_sub == 0:
            break
        ess = essential_subcollection(sub, max_subsets)
        before = defect(sub, range(sub.k))
        current.pop(ess[0])
        after = collection.restrict(current)
        if defect(after, range(after.k)) != before + 1 or minimal_defect(after, max_subsets) != d_sub + 1:
            raise InternalInvariantError("removing an essential support did not raise the defect by one")
    if len(current) != n:
        raise InternalInvariantError(f"core has {len(current)} supports, expected {n}")
    return tuple(current)


@dataclass
class DefectReport:
    """Defect bookkeeping for a collection ``A_1, ..., A_k`` in Z^n.

    ``defect_by_subset`` maps every subcollection to its defect when
    ``k <= 16`` and only the singletons otherwise. ``generic_zero_set_dim``
    is the dimension of the zero set of a generic consistent system; it
    equals ``incidence_dim - (omega_dim - consistency_codim)``.
    """

    ambient_dim: int
    num_supports: int
    defect_by_subset: dict[IndexSubset, int]
    minimal_defect: int
    essential: IndexSubset
    generically_consistent: bool
    consistency_codim: int
    omega_dim: int
    incidence_dim: int
    generic_zero_set_dim: int
    full_table: bool = field(default=True)


def defect_report(collection: SupportCollection, max_subsets: int = DEFAULT_MAX_SUBSETS) -> DefectReport:
    table = defect_table(collection, max_subsets)
    k, n = collection.k, collection.ambient_dim
    d = min(table)
    full = k <= REPORT_TABLE_MAX_K
    if full:
        by_subset = {_unmask(m): v for m, v in enumerate(table)}
    else:
        by_subset = {(i,): table[1 << i] for i in range(k)}
        by_subset[()] = 0
    omega = collection.omega_dim
    return DefectReport(
        ambient_dim=n,
        num_supports=k,
        defect_by_subset=by_subset,
        minimal_defect=d,
        essential=essential_subcollection(collection, max_subsets),
        generically_consistent=d >= 0,
        consistency_codim=max(0, -d),
        omega_dim=omega,
        incidence_dim=n + omega - k,
        generic_zero_set_dim=n - k - d,
        full_table=full,
    )
