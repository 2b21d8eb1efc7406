"""Exact integer linear algebra on sublattices of Z^n.

Everything here works with Python integers (and :class:`fractions.Fraction`
where a rational solve is unavoidable); there are no tolerances.

Conventions
-----------
* Vectors are row vectors and matrices act on the left of row stacks, so
  ``U @ M`` performs row operations on ``M``.
* Hermite normal form is row style: nonzero rows first, pivots strictly
  increasing to the right, pivots positive, entries above a pivot reduced
  into ``[0, pivot)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import InvalidInputError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix with an explicit column count.

    The explicit ``ncols`` keeps shapes such as ``0 x n`` meaningful.
    """

    rows: tuple[Vector, ...]
    ncols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise InvalidInputError(
                    f"row of length {len(row)} in a matrix with {self.ncols} columns"
                )
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise InvalidInputError(f"non-integer matrix entry {x!r}")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> IntegerMatrix:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise InvalidInputError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntegerMatrix:
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.ncols != other.nrows:
            raise InvalidInputError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        return IntegerMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows),
            other.ncols,
        )

    def transpose(self) -> IntegerMatrix:
        if self.nrows == 0:
            return IntegerMatrix.zeros(self.ncols, 0)
        return IntegerMatrix(tuple(zip(*self.rows)), self.nrows)

    def apply(self, v: Sequence[int]) -> Vector:
        """Return ``self @ v`` for a column vector ``v``."""
        if len(v) != self.ncols:
            raise InvalidInputError(f"vector of length {len(v)} for a matrix with {self.ncols} columns")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def _as_matrix(M) -> IntegerMatrix:
    if isinstance(M, IntegerMatrix):
        return M
    return IntegerMatrix.from_rows(M)


def determinant(M) -> int:
    """Determinant of a square integer matrix by Bareiss fraction-free elimination."""
    M = _as_matrix(M)
    n = M.nrows
    if n != M.ncols:
        raise InvalidInputError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in M.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


class EchelonBasis:
    """Incrementally maintained integer row-echelon basis (fraction-free).

    Only the rank and the rational span are meaningful; rows are kept
    primitive to stop coefficient growth.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: dict[int, list[int]] | None = None):
        # pivot column -> primitive row with zeros left of the pivot
        self.rows = rows if rows is not None else {}

    def copy(self) -> EchelonBasis:
        return EchelonBasis(dict(self.rows))

    def __len__(self) -> int:
        return len(self.rows)

    def add(self, v: Sequence[int]) -> bool:
        """Insert ``v``; return True when it enlarged the span."""
        v = list(v)
        for col in sorted(self.rows):
            if v[col]:
                row = self.rows[col]
                p, q = row[col], v[col]
                v = [p * x - q * y for x, y in zip(v, row)]
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            return False
        g = 0
        for x in v:
            g = gcd(g, x)
        if v[lead] < 0:
            g = -g
        self.rows[lead] = [x // g for x in v]
        return True


def rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank over Q of a collection of integer vectors."""
    basis = EchelonBasis()
    for r in rows:
        basis.add(r)
    return len(basis)


# -- normal forms -------------------------------------------------------------


def _swap(a, i, j):
    a[i], a[j] = a[j], a[i]


def _row_sub(a, i, j, q):
    # row_i -= q * row_j
    if q:
        ri, rj = a[i], a[j]
        a[i] = [x - q * y for x, y in zip(ri, rj)]


def hermite_normal_form(M) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``. ``H`` has the
    shape of ``M``; zero rows sit at the bottom.
    """
    M = _as_matrix(M)
    m, n = M.shape
    a = [list(r) for r in M.rows]
    u = [list(r) for r in IntegerMatrix.identity(m).rows]
    prow = 0
    for col in range(n):
        if prow == m:
            break
        while True:
            nz = [i for i in range(prow, m) if a[i][col]]
            if not nz:
                break
            imin = min(nz, key=lambda i: (abs(a[i][col]), i))
            if imin != prow:
                _swap(a, prow, imin)
                _swap(u, prow, imin)
            clean = True
            piv = a[prow][col]
            for i in range(prow + 1, m):
                if a[i][col]:
                    q = a[i][col] // piv
                    _row_sub(a, i, prow, q)
                    _row_sub(u, i, prow, q)
                    if a[i][col]:
                        clean = False
            if clean:
                break
        if not a[prow][col]:
            continue
        if a[prow][col] < 0:
            a[prow] = [-x for x in a[prow]]
            u[prow] = [-x for x in u[prow]]
        piv = a[prow][col]
        for i in range(prow):
            q = a[i][col] // piv
            _row_sub(a, i, prow, q)
            _row_sub(u, i, prow, q)
        prow += 1
    return IntegerMatrix.from_rows(a, n), IntegerMatrix.from_rows(u, m)


def smith_normal_form(M) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """Smith normal form ``D = U @ M @ V`` with ``U``, ``V`` unimodular.

    The diagonal of ``D`` is ``d_1 | d_2 | ... | d_r`` (all positive) followed
    by zeros.
    """
    M = _as_matrix(M)
    m, n = M.shape
    a = [list(r) for r in M.rows]
    u = [list(r) for r in IntegerMatrix.identity(m).rows]
    # v is stored transposed so column operations become row operations
    vt = [list(r) for r in IntegerMatrix.identity(n).rows]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        _swap(vt, i, j)

    def col_sub(i, j, q):
        # col_i -= q * col_j
        if q:
            for row in a:
                row[i] -= q * row[j]
            _row_sub(vt, i, j, q)

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != t:
                _swap(a, t, i)
                _swap(u, t, i)
            if j != t:
                col_swap(t, j)
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    _row_sub(a, i, t, q)
                    _row_sub(u, i, t, q)
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv
                    col_sub(j, t, q)
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            # row_t += row_bad, then the next pass shrinks the pivot
            _row_sub(a, t, bad, -1)
            _row_sub(u, t, bad, -1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    V = IntegerMatrix.from_rows(vt, n).transpose() if n else IntegerMatrix.zeros(0, 0)
    return IntegerMatrix.from_rows(a, n), IntegerMatrix.from_rows(u, m), V


def invariant_factors(M) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form of ``M``."""
    D, _, _ = smith_normal_form(M)
    return tuple(D[i, i] for i in range(min(D.shape)) if D[i, i])


# -- sublattices ----------------------------------------------------------------


@dataclass(frozen=True)
class SublatticeBasis:
    """A sublattice of Z^n stored by its canonical HNF basis.

    Two equal sublattices always have identical ``basis`` matrices, so
    equality of instances is equality of lattices.
    """

    ambient_dim: int
    basis: IntegerMatrix

    def __post_init__(self):
        if self.basis.ncols != self.ambient_dim:
            raise InvalidInputError("basis width does not match the ambient dimension")
        H, _ = hermite_normal_form(self.basis)
        if H != self.basis or rank(self.basis.rows) != self.basis.nrows:
            raise InvalidInputError("basis is not an independent row HNF; use from_generators")

    @classmethod
    def from_generators(cls, ambient_dim: int, generators: Iterable[Sequence[int]]) -> SublatticeBasis:
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if len(g) != ambient_dim:
                raise InvalidInputError(f"generator {g} does not live in Z^{ambient_dim}")
        if not gens:
            return cls(ambient_dim, IntegerMatrix.zeros(0, ambient_dim))
        H, _ = hermite_normal_form(IntegerMatrix(tuple(gens), ambient_dim))
        nonzero = tuple(r for r in H.rows if any(r))
        return cls(ambient_dim, IntegerMatrix(nonzero, ambient_dim))

    @classmethod
    def full(cls, n: int) -> SublatticeBasis:
        return cls(n, IntegerMatrix.identity(n))

    @property
    def rank(self) -> int:
        return self.basis.nrows

    def coordinates(self, v: Sequence[int]) -> tuple[Fraction, ...] | None:
        """Rational coordinates of ``v`` in this basis, or None if ``v`` is off the span."""
        rest = [Fraction(x) for x in v]
        coords = []
        for row in self.basis.rows:
            p = next(i for i, x in enumerate(row) if x)
            c = rest[p] / row[p]
            coords.append(c)
            if c:
                rest = [x - c * y for x, y in zip(rest, row)]
        if any(rest):
            return None
        return tuple(coords)

    def __contains__(self, v) -> bool:
        coords = self.coordinates(v)
        return coords is not None and all(c.denominator == 1 for c in coords)

    def contains_lattice(self, other: SublatticeBasis) -> bool:
        return other.ambient_dim == self.ambient_dim and all(r in self for r in other.basis.rows)

    def is_saturated(self) -> bool:
        return all(d == 1 for d in invariant_factors(self.basis))


def difference_lattice(collection, J: Iterable[int]) -> SublatticeBasis:
    """Lattice generated by the differences of points within each support ``A_i``, ``i`` in ``J``.

    ``collection`` is a :class:`~laurentinv.collection.SupportCollection`;
    indices are 0-based.
    """
    J = collection.check_subset(J)
    n = collection.ambient_dim
    gens = []
    for i in J:
        pts = collection.supports[i]
        anchor = pts[0]
        gens.extend(tuple(a - b for a, b in zip(p, anchor)) for p in pts[1:])
    return SublatticeBasis.from_generators(n, gens)


def saturation(G: SublatticeBasis) -> SublatticeBasis:
    """Integer points of the rational span of ``G``."""
    if G.rank == 0:
        return G
    _, _, V = smith_normal_form(G.basis)
    # B = U^-1 D V^-1, so the span of B is spanned by the first r rows of V^-1,
    # which extend to a basis of Z^n and therefore span a saturated lattice
    Vinv = unimodular_inverse(V)
    return SublatticeBasis.from_generators(G.ambient_dim, Vinv.rows[: G.rank])


def unimodular_inverse(U: IntegerMatrix) -> IntegerMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = U.nrows
    if n != U.ncols:
        raise InvalidInputError("inverse of a non-square matrix")
    if n == 0:
        return U
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U.rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            raise InvalidInputError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = []
    for row in a:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise InvalidInputError("matrix is not unimodular")
        out.append(tuple(int(x) for x in tail))
    return IntegerMatrix(tuple(out), n)


def lattice_index(G: SublatticeBasis, L: SublatticeBasis) -> int:
    """Index ``[L : G]`` of a full-rank sublattice ``G`` of ``L``.

    Returns 1 for two rank-0 lattices.
    """
    if G.ambient_dim != L.ambient_dim or G.rank != L.rank:
        raise InvalidInputError(f"rank mismatch: rank {G.rank} inside rank {L.rank}")
    coords = []
    for row in G.basis.rows:
        c = L.coordinates(row)
        if c is None or any(x.denominator != 1 for x in c):
            raise InvalidInputError(f"generator {row} is not in the enclosing lattice")
        coords.append([int(x) for x in c])
    return abs(determinant(IntegerMatrix.from_rows(coords, L.rank))) if coords else 1


@dataclass(frozen=True)
class QuotientMap:
    """Surjection ``Z^n -> Z^m`` whose kernel is a given saturated sublattice.

    ``matrix`` is ``m x n`` and acts on column vectors: ``project(x) = matrix @ x``.
    """

    source_dim: int
    target_dim: int
    matrix: IntegerMatrix

    def project(self, v: Sequence[int]) -> Vector:
        return self.matrix.apply(v)


def quotient_map(L: SublatticeBasis) -> QuotientMap:
    """Canonical projection of Z^n onto Z^n / L for a saturated lattice ``L``.

    Built from the Smith form ``U B V = [I | 0]`` of the basis ``B``: in the
    coordinates ``x V`` the lattice is the span of the first ``r`` unit
    vectors, so the trailing ``n - r`` coordinates give the quotient. The
    result is brought to HNF, which does not change kernel or image.
    """
    n, r = L.ambient_dim, L.rank
    if not L.is_saturated():
        raise InvalidInputError("quotient_map needs a saturated lattice")
    if r == 0:
        return QuotientMap(n, n, IntegerMatrix.identity(n))
    if r == n:
        return QuotientMap(n, 0, IntegerMatrix.zeros(0, n))
    _, _, V = smith_normal_form(L.basis)
    P = IntegerMatrix(tuple(tuple(V[i, j] for i in range(n)) for j in range(r, n)), n)
    H, _ = hermite_normal_form(P)
    return QuotientMap(n, n - r, H)
