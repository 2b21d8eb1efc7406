"""Support collections and input validation helpers."""

from __future__ import annotations

import numbers
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError

Point = tuple[int, ...]
IndexSubset = tuple[int, ...]


class DuplicatePointWarning(UserWarning):
    pass


def check_integer(x, what: str = "coordinate") -> int:
    """Return ``x`` as a Python int, refusing non-integral values and bools."""
    if isinstance(x, (bool, np.bool_)):
        raise InvalidInputError(f"{what} {x!r} is a boolean, not an integer")
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, numbers.Real) and float(x).is_integer():
        return int(x)
    raise InvalidInputError(f"{what} {x!r} is not an integer")


def check_points(points, ambient_dim: int | None = None, *, where: str = "") -> list[Point]:
    """Validate a 2-d array-like of integer points.

    Accepts lists, tuples and numpy arrays. Returns a list of int tuples in
    input order (duplicates kept).
    """
    if isinstance(points, np.ndarray):
        if points.ndim != 2:
            raise InvalidInputError(f"{where}expected a 2-d array of points, got ndim={points.ndim}")
        points = points.tolist()
    out = []
    for j, p in enumerate(points):
        if isinstance(p, (str, bytes)) or not isinstance(p, (Sequence, np.ndarray)):
            raise InvalidInputError(f"{where}point {j} is not a coordinate vector: {p!r}")
        q = tuple(check_integer(x, f"{where}point {j} coordinate") for x in p)
        if ambient_dim is not None and len(q) != ambient_dim:
            raise InvalidInputError(
                f"{where}point {j} has {len(q)} coordinates, expected {ambient_dim}"
            )
        out.append(q)
    return out


@dataclass(frozen=True)
class SupportCollection:
    """Ordered collection ``A_1, ..., A_k`` of finite nonempty subsets of Z^n.

    Each support is stored sorted and deduplicated; the collection is hashable
    so derived tables can be cached per collection. Indices into the
    collection are 0-based throughout the Python API.
    """

    ambient_dim: int
    supports: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        if not isinstance(self.ambient_dim, int) or self.ambient_dim < 0:
            raise InvalidInputError(f"ambient dimension must be a nonnegative int, got {self.ambient_dim!r}")
        for i, pts in enumerate(self.supports):
            if not pts:
                raise InvalidInputError(f"support {i}: supports must be nonempty")
            if len(set(pts)) != len(pts):
                raise InvalidInputError(f"support {i} contains duplicate points")
            for j, p in enumerate(pts):
                if len(p) != self.ambient_dim:
                    raise InvalidInputError(
                        f"support {i}, point {j}: {len(p)} coordinates, expected {self.ambient_dim}"
                    )

    @classmethod
    def from_points(cls, supports: Iterable, ambient_dim: int | None = None) -> SupportCollection:
        """Build a collection from nested point lists, deduplicating with a warning."""
        supports = list(supports)
        if ambient_dim is None:
            for s in supports:
                for p in s:
                    ambient_dim = len(p)
                    break
                if ambient_dim is not None:
                    break
        if ambient_dim is None:
            raise InvalidInputError("cannot infer the ambient dimension; pass ambient_dim")
        ambient_dim = check_integer(ambient_dim, "ambient dimension")
        if ambient_dim < 0:
            raise InvalidInputError("ambient dimension must be nonnegative")
        clean = []
        for i, s in enumerate(supports):
            pts = check_points(s, ambient_dim, where=f"support {i}, ")
            if not pts:
                raise InvalidInputError(f"support {i}: supports must be nonempty")
            uniq = sorted(set(pts))
            if len(uniq) != len(pts):
                warnings.warn(
                    f"support {i}: {len(pts) - len(uniq)} duplicate point(s) removed",
                    DuplicatePointWarning,
                    stacklevel=2,
                )
            clean.append(tuple(uniq))
        return cls(ambient_dim, tuple(clean))

    def __len__(self) -> int:
        return len(self.supports)

    @property
    def k(self) -> int:
        return len(self.supports)

    def check_subset(self, J: Iterable[int]) -> IndexSubset:
        """Canonical sorted form of an index subset; raises IndexError when out of range."""
        J = tuple(sorted(set(int(i) for i in J)))
        for i in J:
            if not 0 <= i < self.k:
                raise IndexError(f"support index {i} out of range for a collection of {self.k}")
        return J

    def complement(self, J: Iterable[int]) -> IndexSubset:
        J = set(self.check_subset(J))
        return tuple(i for i in range(self.k) if i not in J)

    def restrict(self, J: Iterable[int]) -> SupportCollection:
        return SupportCollection(self.ambient_dim, tuple(self.supports[i] for i in self.check_subset(J)))

    def transform(self, U, shifts=None) -> SupportCollection:
        """Image under ``x -> x @ U + shift_i`` for an integer ``n x n`` matrix ``U``.

        ``shifts`` optionally gives one translation vector per support.
        """
        rows = U.rows if hasattr(U, "rows") else [tuple(r) for r in U]
        n = self.ambient_dim
        out = []
        for i, pts in enumerate(self.supports):
            t = shifts[i] if shifts is not None else (0,) * n
            out.append([
                tuple(sum(p[a] * rows[a][b] for a in range(n)) + t[b] for b in range(n)) for p in pts
            ])
        return SupportCollection.from_points(out, n)

    @property
    def omega_dim(self) -> int:
        """Dimension of the coefficient space, the total number of support points."""
        return sum(len(s) for s in self.supports)

    def to_lists(self) -> list[list[list[int]]]:
        return [[list(p) for p in s] for s in self.supports]


def check_collection(X, ambient_dim: int | None = None) -> SupportCollection:
    """Coerce ``X`` to a :class:`SupportCollection`.

    ``X`` may already be a collection, a sequence of point arrays, or a
    mapping with ``ambient_dim`` and ``supports`` keys (the JSON document
    layout).
    """
    if isinstance(X, SupportCollection):
        if ambient_dim is not None and X.ambient_dim != ambient_dim:
            raise InvalidInputError(f"collection lives in Z^{X.ambient_dim}, expected Z^{ambient_dim}")
        return X
    if isinstance(X, dict):
        if "supports" not in X:
            raise InvalidInputError("mapping input needs a 'supports' key")
        ambient_dim = X.get("ambient_dim", ambient_dim)
        X = X["supports"]
    if isinstance(X, (str, bytes)):
        raise InvalidInputError("expected a collection of supports, got a string")
    return SupportCollection.from_points(X, ambient_dim)
