"""scikit-learn style front end.

:class:`SupportSystemAnalyzer` is fitted on a support collection. Fitting
finds the essential subcollection ``J`` and the quotient lattice
Z^n / Lambda(J); ``transform`` then maps exponent vectors into that
quotient, which is where the remaining equations live.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .collection import SupportCollection, check_collection, check_points
from .combinatorics import DEFAULT_MAX_SUBSETS
from .geometry import DEFAULT_MAX_LATTICE_POINTS
from .invariants import full_report


def _looks_like_collection(X) -> bool:
    if isinstance(X, (SupportCollection, dict)):
        return True
    if isinstance(X, np.ndarray):
        return X.ndim == 3
    try:
        first = X[0]
        return len(first) > 0 and hasattr(first[0], "__len__")
    except (TypeError, IndexError, KeyError):
        return False


class SupportSystemAnalyzer(TransformerMixin, BaseEstimator):
    """Essential subcollection, invariants and quotient projection of a support collection.

    Parameters
    ----------
    max_subsets : int
        Largest number of subcollections (``2**k``) the defect scan may visit.
    max_lattice_points : int
        Cap on the search box used for interior lattice point counts.

    Attributes
    ----------
    collection_ : SupportCollection
    n_features_in_ : int
        Ambient dimension ``n``.
    minimal_defect_ : int
    essential_ : tuple of int
        0-based indices of the essential subcollection.
    index_ : int
        Number of components, ``[Lambda(J) : G(J)]``.
    projection_matrix_ : ndarray of shape (m, n)
        Integer matrix of the quotient map.
    root_count_, euler_characteristic_, geometric_genus_ : int or None
        ``None`` when the invariant does not apply; see ``report_.notes``.
    report_ : InvariantReport
    """

    def __init__(self, max_subsets=DEFAULT_MAX_SUBSETS, max_lattice_points=DEFAULT_MAX_LATTICE_POINTS):
        self.max_subsets = max_subsets
        self.max_lattice_points = max_lattice_points

    def fit(self, X, y=None):
        A = check_collection(X)
        report = full_report(A, self.max_subsets, self.max_lattice_points)
        s = report.structure
        self.collection_ = A
        self.n_features_in_ = A.ambient_dim
        self.report_ = report
        self.minimal_defect_ = report.defect_report.minimal_defect
        self.essential_ = s.essential
        self.index_ = s.num_components
        self.quotient_map_ = s.quotient
        self.projection_matrix_ = np.array(s.quotient.matrix.tolist(), dtype=np.int64).reshape(
            s.quotient.target_dim, A.ambient_dim
        )
        self.root_count_ = report.root_count
        self.euler_characteristic_ = report.euler_characteristic
        self.geometric_genus_ = report.geometric_genus
        return self

    def _project(self, X):
        pts = check_points(X, self.n_features_in_)
        m = self.quotient_map_.target_dim
        return np.array([self.quotient_map_.project(p) for p in pts], dtype=np.int64).reshape(len(pts), m)

    def transform(self, X):
        """Project points to the quotient lattice.

        ``X`` is either an ``(n_points, n)`` integer array, giving an
        ``(n_points, m)`` array, or a whole support collection, giving one
        array of projected (deduplicated, sorted) points per support.
        """
        check_is_fitted(self, "quotient_map_")
        if _looks_like_collection(X):
            A = check_collection(X, self.n_features_in_)
            m = self.quotient_map_.target_dim
            out = []
            for s in A.supports:
                pts = sorted({self.quotient_map_.project(p) for p in s})
                out.append(np.array(pts, dtype=np.int64).reshape(len(pts), m))
            return out
        return self._project(X)

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X, y).transform(X)

