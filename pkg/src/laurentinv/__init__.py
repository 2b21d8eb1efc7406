"""Discrete invariants of generic consistent systems of Laurent polynomials.

Given only the supports ``A_1, ..., A_k`` in Z^n, decide whether a generic
system is consistent, find the essential subcollection, and compute the
codimension of the consistent systems together with the root count, Euler
characteristic, geometric genus and component structure of the zero set of
a generic consistent system.
"""

__version__ = "0.1.0"

from .collection import SupportCollection, check_collection, check_points
from .combinatorics import (
    DefectReport,
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
from .errors import (
    CapExceededError,
    InternalInvariantError,
    InvalidInputError,
    LaurentInvError,
    PreconditionError,
)
from .geometry import (
    LatticePolytope,
    convex_hull,
    interior_lattice_point_count,
    lattice_points,
    lattice_volume,
    minkowski_sum,
    project_support,
)
from .invariants import (
    InvariantReport,
    ZeroSetStructure,
    bkk_number,
    euler_characteristic,
    full_report,
    geometric_genus,
    root_count,
    zero_set_structure,
)
from .lattice import (
    IntegerMatrix,
    QuotientMap,
    SublatticeBasis,
    difference_lattice,
    hermite_normal_form,
    lattice_index,
    quotient_map,
    saturation,
    smith_normal_form,
)
from .estimator import SupportSystemAnalyzer
