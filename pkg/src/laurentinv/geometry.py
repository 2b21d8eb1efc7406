"""Exact convex hulls, Minkowski sums, volumes and lattice points of polytopes.

Points may be rational. Internally every polytope is scaled by the least
common denominator of its input points so that all hull arithmetic runs on
Python integers. Polytopes of lower dimension than their ambient space are
handled through a coordinate projection that is injective on the affine
hull.

The hull is built incrementally (beneath-beyond) with a triangulated
boundary. Coplanar simplices are merged into true facets afterwards, and
the boundary triangulation, coned from a fixed vertex, gives the volume.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import ceil, factorial, floor, gcd, lcm
from typing import Iterable, Sequence

from .errors import CapExceededError, InternalInvariantError, InvalidInputError
from .lattice import EchelonBasis, QuotientMap, determinant

DEFAULT_MAX_LATTICE_POINTS = 10**7

Number = int | Fraction


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _simplex_normal(q):
    """Integer normal of the hyperplane through ``r`` affinely independent points of Z^r."""
    r = len(q)
    vecs = [tuple(a - b for a, b in zip(p, q[0])) for p in q[1:]]
    normal = []
    for j in range(r):
        minor = [row[:j] + row[j + 1 :] for row in vecs]
        normal.append((-1) ** j * determinant(minor) if minor else (-1) ** j)
    return _primitive(normal)


def _beneath_beyond(pts: list[tuple[int, ...]], r: int) -> dict[int, tuple]:
    """Triangulated boundary of the hull of integer points spanning R^r, ``r >= 1``.

    Returns ``{facet_id: (point indices, outward normal, offset)}``; every
    input point satisfies ``normal . x <= offset``.
    """
    basis = EchelonBasis()
    init = [0]
    for idx in range(1, len(pts)):
        if basis.add(tuple(a - b for a, b in zip(pts[idx], pts[0]))):
            init.append(idx)
            if len(init) == r + 1:
                break
    if len(init) != r + 1:
        raise InternalInvariantError("points do not span the expected dimension")
    # (r + 1) times the centroid of the initial simplex, strictly interior
    center = tuple(sum(pts[i][c] for i in init) for c in range(r))

    facets: dict[int, tuple] = {}
    ridges: dict[frozenset, list[int]] = {}
    counter = itertools.count()

    def add(verts):
        normal = _simplex_normal([pts[v] for v in verts])
        offset = _dot(normal, pts[verts[0]])
        side = _dot(normal, center) - (r + 1) * offset
        if side == 0:
            raise InternalInvariantError("degenerate boundary simplex")
        if side > 0:
            normal = tuple(-x for x in normal)
            offset = -offset
        fid = next(counter)
        facets[fid] = (verts, normal, offset)
        for j in range(r):
            ridges.setdefault(frozenset(verts[:j] + verts[j + 1 :]), []).append(fid)

    def remove(fid):
        verts = facets.pop(fid)[0]
        for j in range(r):
            key = frozenset(verts[:j] + verts[j + 1 :])
            owners = ridges[key]
            owners.remove(fid)
            if not owners:
                del ridges[key]

    for j in range(r + 1):
        add(tuple(init[:j] + init[j + 1 :]))

    chosen = set(init)
    for idx, p in enumerate(pts):
        if idx in chosen:
            continue
        visible = {fid for fid, (_, nrm, off) in facets.items() if _dot(nrm, p) > off}
        if not visible:
            continue
        horizon = []
        for fid in visible:
            verts = facets[fid][0]
            for j in range(r):
                key = frozenset(verts[:j] + verts[j + 1 :])
                other = [g for g in ridges[key] if g != fid]
                if len(other) != 1:
                    raise InternalInvariantError("boundary ridge not shared by exactly two simplices")
                if other[0] not in visible:
                    horizon.append(key)
        for fid in visible:
            remove(fid)
        for key in horizon:
            add(tuple(sorted(key)) + (idx,))
    return facets


def _to_number(x: Fraction) -> Number:
    return int(x) if x.denominator == 1 else x


class LatticePolytope:
    """Convex polytope with rational vertices in R^m.

    Build instances with :func:`convex_hull`. ``facets`` holds inequalities
    ``a . x <= b`` and ``equations`` holds ``a . x == b`` cutting out the
    affine hull (empty for full-dimensional polytopes); together they
    describe exactly the same set as ``vertices``.
    """

    def __init__(self, ambient_dim, vertices, dim, facets, equations, *, scale, coords, lift, origin, simplices,
                 reduced_facets):
        self.ambient_dim = ambient_dim
        self.vertices: tuple[tuple[Number, ...], ...] = vertices
        self.dim = dim
        self.facets: tuple[tuple[tuple[int, ...], Number], ...] = facets
        self.equations: tuple[tuple[tuple[int, ...], Number], ...] = equations
        # internals, all in coordinates scaled by `scale`
        self._scale = scale
        self._coords = coords
        self._lift = lift
        self._origin = origin
        self._simplices = simplices
        self._reduced_facets = reduced_facets

    def __repr__(self):
        return f"LatticePolytope(dim={self.dim}, ambient_dim={self.ambient_dim}, vertices={list(self.vertices)})"

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __add__(self, other):
        return minkowski_sum(self, other)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def is_lattice_polytope(self) -> bool:
        return self._scale == 1

    def contains(self, x: Sequence) -> bool:
        """Exact membership test for a rational point."""
        if len(x) != self.ambient_dim:
            raise InvalidInputError("point dimension does not match the polytope")
        x = [Fraction(v) for v in x]
        return all(_dot(a, x) == b for a, b in self.equations) and all(_dot(a, x) <= b for a, b in self.facets)

    def scaled(self, t: int) -> LatticePolytope:
        """Dilate by a nonnegative integer factor."""
        return convex_hull([tuple(t * c for c in v) for v in self.vertices], ambient_dim=self.ambient_dim)

    def translated(self, shift: Sequence) -> LatticePolytope:
        return convex_hull([tuple(a + b for a, b in zip(v, shift)) for v in self.vertices], ambient_dim=self.ambient_dim)

    def _reduced_box(self):
        if self.dim == 0:
            return []
        lo, hi = [], []
        for c in self._coords:
            vals = [Fraction(v[c]) for v in self.vertices]
            lo.append(ceil(min(vals)))
            hi.append(floor(max(vals)))
        return list(zip(lo, hi))

    def _iter_lattice_points(self, strict: bool, max_points: int):
        if self.dim == 0:
            v = self.vertices[0]
            if all(Fraction(c).denominator == 1 for c in v):
                yield tuple(int(c) for c in v)
            return
        box = self._reduced_box()
        size = 1
        for lo, hi in box:
            size *= max(0, hi - lo + 1)
        if size > max_points:
            raise CapExceededError(f"lattice point search box has {size} points, cap is {max_points}")
        D = self._scale
        origin = self._origin
        o_red = [origin[c] for c in self._coords]
        for y in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
            ys = [D * v for v in y]
            ok = True
            for a, b in self._reduced_facets:
                s = _dot(a, ys)
                if s > b or (strict and s == b):
                    ok = False
                    break
            if not ok:
                continue
            if self._lift is None:
                yield tuple(y)
                continue
            # point of the affine hull over the reduced coordinates y
            delta = [v - o for v, o in zip(ys, o_red)]
            full = []
            for j in range(self.ambient_dim):
                val = origin[j] + sum(d * row[j] for d, row in zip(delta, self._lift))
                if val.denominator != 1 or val.numerator % D:
                    break
                full.append(val.numerator // D)
            else:
                yield tuple(full)


def convex_hull(points: Iterable[Sequence], ambient_dim: int | None = None) -> LatticePolytope:
    """Convex hull of a finite nonempty set of rational points."""
    raw = [tuple(Fraction(c) for c in p) for p in points]
    if not raw:
        raise InvalidInputError("convex hull of an empty point set")
    m = len(raw[0]) if ambient_dim is None else ambient_dim
    if any(len(p) != m for p in raw):
        raise InvalidInputError("points of different dimensions")
    D = 1
    for p in raw:
        for c in p:
            D = lcm(D, c.denominator)
    pts = sorted({tuple(int(c * D) for c in p) for p in raw})

    def unscale(p):
        return tuple(_to_number(Fraction(c, D)) for c in p)

    p0 = pts[0]
    basis = EchelonBasis()
    for p in pts[1:]:
        basis.add(tuple(a - b for a, b in zip(p, p0)))
    r = len(basis)
    coords = tuple(sorted(basis.rows))

    equations = _affine_equations(basis, m)
    eq_out = tuple((a, _to_number(Fraction(_dot(a, p0), D))) for a in equations)

    if r == 0:
        return LatticePolytope(m, (unscale(p0),), 0, (), eq_out, scale=D, coords=(), lift=None,
                               origin=p0, simplices=(), reduced_facets=())

    reduced = [tuple(p[c] for c in coords) for p in pts]
    simplicial = _beneath_beyond(reduced, r)
    planes = sorted({(nrm, off) for _, nrm, off in simplicial.values()})

    vertex_idx = []
    for idx, q in enumerate(reduced):
        tight = EchelonBasis()
        for nrm, off in planes:
            if _dot(nrm, q) == off:
                tight.add(nrm)
        if len(tight) == r:
            vertex_idx.append(idx)
    vertices = tuple(sorted(unscale(pts[i]) for i in vertex_idx))

    facets = []
    for nrm, off in planes:
        a = [0] * m
        for c, x in zip(coords, nrm):
            a[c] = x
        facets.append((tuple(a), _to_number(Fraction(off, D))))

    lift = None
    if r < m:
        lift = _lift_matrix(basis, coords, m)
    base = reduced[vertex_idx[0]]
    simplices = tuple(tuple(reduced[v] for v in verts) for verts, _, _ in simplicial.values())
    return LatticePolytope(
        m, vertices, r, tuple(facets), eq_out, scale=D, coords=coords, lift=lift, origin=p0,
        simplices=(base, simplices), reduced_facets=tuple(planes),
    )


def _affine_equations(basis: EchelonBasis, m: int) -> list[tuple[int, ...]]:
    """Primitive integer basis of the vectors orthogonal to the span of ``basis``."""
    pivots = sorted(basis.rows)
    free = [j for j in range(m) if j not in basis.rows]
    out = []
    # reduced row echelon form over Q
    rref = {}
    for p in reversed(pivots):
        row = [Fraction(x, basis.rows[p][p]) for x in basis.rows[p]]
        for q, other in rref.items():
            if row[q]:
                f = row[q]
                row = [x - f * y for x, y in zip(row, other)]
        rref[p] = row
    for f in free:
        vec = [Fraction(0)] * m
        vec[f] = Fraction(1)
        for p in pivots:
            vec[p] = -rref[p][f]
        den = 1
        for x in vec:
            den = lcm(den, x.denominator)
        out.append(_primitive([int(x * den) for x in vec]))
    return out


def _lift_matrix(basis: EchelonBasis, coords, m):
    """Rational ``r x m`` matrix taking reduced-coordinate offsets to full offsets."""
    rows = [basis.rows[p] for p in coords]
    r = len(rows)
    # offsets are row vectors w = z R with reduced part w_S = z S, so
    # w = w_S S^-1 R for the r x r pivot block S
    S = [[Fraction(rows[i][c]) for c in coords] for i in range(r)]
    R = [[Fraction(x) for x in row] for row in rows]
    aug = [S[i][:] + [Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    for c in range(r):
        p = next(i for i in range(c, r) if aug[i][c])
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(r):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    Sinv = [row[r:] for row in aug]
    return tuple(tuple(sum(Sinv[i][k] * R[k][j] for k in range(r)) for j in range(m)) for i in range(r))


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.ambient_dim != Q.ambient_dim:
        raise InvalidInputError(f"Minkowski sum of polytopes in dimensions {P.ambient_dim} and {Q.ambient_dim}")
    return convex_hull(
        (tuple(a + b for a, b in zip(u, v)) for u in P.vertices for v in Q.vertices),
        ambient_dim=P.ambient_dim,
    )


def minkowski_sum_all(polytopes: Sequence[LatticePolytope], ambient_dim: int) -> LatticePolytope:
    """Minkowski sum of a list of polytopes; the empty sum is the origin."""
    total = convex_hull([(0,) * ambient_dim], ambient_dim=ambient_dim)
    for P in polytopes:
        total = minkowski_sum(total, P)
    return total


def lattice_volume(P: LatticePolytope) -> Fraction:
    """Euclidean volume normalized so that the unit cube of Z^m has volume 1.

    Lower-dimensional polytopes have volume 0; a polytope in R^0 has volume 1.
    """
    m = P.ambient_dim
    if m == 0:
        return Fraction(1)
    if P.dim < m:
        return Fraction(0)
    base, simplices = P._simplices
    total = 0
    for simplex in simplices:
        total += abs(determinant([tuple(a - b for a, b in zip(q, base)) for q in simplex]))
    return Fraction(total, factorial(m) * P._scale**m)


def lattice_points(P: LatticePolytope, max_points: int = DEFAULT_MAX_LATTICE_POINTS) -> list[tuple[int, ...]]:
    """All integer points of ``P`` in lexicographic order."""
    return sorted(P._iter_lattice_points(False, max_points))


def interior_lattice_point_count(P: LatticePolytope, max_points: int = DEFAULT_MAX_LATTICE_POINTS) -> int:
    """Number of integer points in the relative interior of ``P``."""
    return sum(1 for _ in P._iter_lattice_points(True, max_points))


def project_support(points: Iterable[Sequence[int]], qmap: QuotientMap) -> list[tuple[int, ...]]:
    """Image of a point set under a quotient map, deduplicated and sorted."""
    out = set()
    for p in points:
        if len(p) != qmap.source_dim:
            raise InvalidInputError(f"point {tuple(p)} does not live in Z^{qmap.source_dim}")
        out.add(qmap.project(p))
    return sorted(out)
