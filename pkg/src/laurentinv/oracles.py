"""Slow, independent reference computations used to cross-check the main code paths.

Each oracle reaches its answer by a different route than the function it
checks:

* :func:`ehrhart_volume` counts lattice points of dilates against facets
  found by brute force, instead of triangulating;
* :func:`mixed_volume_by_interpolation` recovers the mixed volume from the
  polynomial ``lambda -> vol(sum lambda_i P_i)`` instead of
  inclusion-exclusion;
* :func:`index_by_fundamental_domain` counts lattice points in a half-open
  parallelepiped instead of taking a determinant;
* :func:`exhaustive_essential` recomputes every defect with rational
  Gaussian elimination instead of incremental fraction-free echelon bases.

Random instances are drawn from per-instance seeds derived from
``OracleConfig.random_seed`` so that results do not depend on order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Sequence

from .collection import IndexSubset, SupportCollection
from .errors import CapExceededError, InternalInvariantError, InvalidInputError
from .geometry import LatticePolytope, convex_hull, lattice_volume, minkowski_sum
from .combinatorics import essential_subcollection, minimal_defect
from .invariants import bkk_number
from .lattice import IntegerMatrix, SublatticeBasis, lattice_index, saturation


@dataclass(frozen=True)
class OracleConfig:
    random_seed: int = 20240611
    instance_count: int = 200
    dimension_cap: int = 3
    coordinate_bound: int = 4
    support_size_cap: int = 4

    def __post_init__(self):
        for name in ("instance_count", "dimension_cap", "coordinate_bound", "support_size_cap"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be positive")


def instance_rng(seed: int, label: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{label}:{i}")


# -- rational linear algebra (deliberately separate from lattice.py) ------------


def _rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rational_rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(_rref(rows, ncols)[1])


def _nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    red, pivots = _rref(rows, ncols)
    out = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        out.append(v)
    return out


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# -- polytopes by brute force -------------------------------------------------------


def brute_force_hrep(points: Sequence[Sequence[int]]):
    """Affine-hull equations and facet inequalities of ``conv(points)`` by exhaustive search.

    Every hyperplane (inside the affine hull) through ``dim`` of the points
    that keeps all points on one side is a facet-supporting hyperplane.
    """
    pts = sorted({tuple(p) for p in points})
    m = len(pts[0])
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    red, _ = _rref(diffs, m) if diffs else ([], [])
    r = len(red)
    equations = [(c, _dot(c, p0)) for c in _nullspace(red, m)] if r else [
        ([Fraction(int(i == j)) for j in range(m)], Fraction(p0[i])) for i in range(m)
    ]
    facets = set()
    if r >= 1:
        for combo in itertools.combinations(pts, r):
            vecs = [[a - b for a, b in zip(q, combo[0])] for q in combo[1:]]
            # normal lies in the direction space and is orthogonal to the combo
            sys_rows = [[_dot(v, b) for b in red] for v in vecs]
            null = _nullspace(sys_rows, r)
            if len(null) != 1:
                continue
            normal = [sum(c * b[j] for c, b in zip(null[0], red)) for j in range(m)]
            off = _dot(normal, combo[0])
            vals = [_dot(normal, p) for p in pts]
            if all(v <= off for v in vals):
                facets.add(_normalize(normal, off))
            elif all(v >= off for v in vals):
                facets.add(_normalize([-x for x in normal], -off))
    return equations, sorted(facets)


def _normalize(normal, off):
    scale = next(abs(x) for x in normal if x != 0)
    return tuple(x / scale for x in normal), off / scale


def _count_points(points, max_points):
    equations, facets = brute_force_hrep(points)
    m = len(points[0])
    box = [(min(p[j] for p in points), max(p[j] for p in points)) for j in range(m)]
    size = 1
    for lo, hi in box:
        size *= hi - lo + 1
    if size > max_points:
        raise CapExceededError(f"box of {size} points exceeds the cap {max_points}")
    count = 0
    for x in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
        if all(_dot(c, x) == b for c, b in equations) and all(_dot(a, x) <= b for a, b in facets):
            count += 1
    return count


def ehrhart_volume(P: LatticePolytope, max_points: int = 10**6) -> Fraction:
    """Leading coefficient of the degree-``m`` interpolant of ``t -> #(tP cap Z^m)``.

    Uses ``t = 0, ..., m``; the ``m``-th finite difference divided by ``m!``.
    """
    m = P.ambient_dim
    if m > 4:
        raise CapExceededError("ehrhart_volume supports dimension at most 4")
    if not P.is_lattice_polytope:
        raise InvalidInputError("ehrhart_volume needs integer vertices")
    counts = [1] + [_count_points([tuple(t * c for c in v) for v in P.vertices], max_points) for t in range(1, m + 1)]
    diff = sum((-1) ** (m - j) * comb(m, j) * counts[j] for j in range(m + 1))
    return Fraction(diff, factorial(m))


def ehrhart_counts(P: LatticePolytope, tmax: int, max_points: int = 10**6) -> list[int]:
    return [1] + [_count_points([tuple(t * c for c in v) for v in P.vertices], max_points) for t in range(1, tmax + 1)]


def _monomials(m: int) -> list[tuple[int, ...]]:
    return [e for e in itertools.product(range(m + 1), repeat=m) if sum(e) == m]


def mixed_volume_by_interpolation(polytopes: Sequence[LatticePolytope]) -> int:
    """Coefficient of ``l_1 ... l_m`` in ``vol(l_1 P_1 + ... + l_m P_m)``.

    That coefficient is ``m!`` times the mixed volume, i.e. the BKK number.
    The volume polynomial is homogeneous of degree ``m``; its coefficients
    are solved from evaluations on the grid ``{1, ..., m+1}^m``, and two
    further grid points are checked against the fit.
    """
    m = len(polytopes)
    if m > 3:
        raise CapExceededError("mixed_volume_by_interpolation supports m <= 3")
    if any(P.ambient_dim != m for P in polytopes):
        raise InvalidInputError("need m polytopes in R^m")
    if m == 0:
        return 1
    monos = _monomials(m)

    def volume_at(lam):
        total = convex_hull([(0,) * m])
        for t, P in zip(lam, polytopes):
            total = minkowski_sum(total, P.scaled(t))
        return lattice_volume(total)

    rows, values = [], []
    grid = list(itertools.product(range(1, m + 2), repeat=m))
    extra = []
    for lam in grid:
        row = [Fraction(_prod(l**e for l, e in zip(lam, mono))) for mono in monos]
        if len(rows) < len(monos):
            if rational_rank(rows + [row], len(monos)) > len(rows):
                rows.append(row)
                values.append(volume_at(lam))
        elif len(extra) < 2:
            extra.append((row, volume_at(lam)))
        else:
            break
    if len(rows) != len(monos):
        raise InternalInvariantError("interpolation grid is not unisolvent")
    red, _ = _rref([r + [v] for r, v in zip(rows, values)], len(monos) + 1)
    coeffs = [row[-1] for row in red]
    for row, v in extra:
        if _dot(row, coeffs) != v:
            raise InternalInvariantError("volume is not a homogeneous polynomial of degree m on the grid")
    target = monos.index((1,) * m)
    mv = coeffs[target]
    return int(mv) if mv.denominator == 1 else mv


def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out


def index_by_fundamental_domain(G: SublatticeBasis, L: SublatticeBasis, max_box: int = 10**6) -> int:
    """Number of points of ``L`` in the half-open parallelepiped spanned by ``G``'s basis."""
    r = G.rank
    if r != L.rank:
        raise InvalidInputError("rank mismatch")
    if r == 0:
        return 1
    n = G.ambient_dim
    # coordinates of G's basis in L's basis by solving B_L^T c = g
    LT = [[L.basis.rows[i][j] for i in range(r)] for j in range(n)]
    C = []
    for g in G.basis.rows:
        red, pivots = _rref([row + [g[j]] for j, row in enumerate(LT)], r + 1)
        if r in pivots:
            raise InvalidInputError("G is not inside the span of L")
        c = [row[-1] for row in red]
        if any(x.denominator != 1 for x in c):
            raise InvalidInputError("G is not a sublattice of L")
        C.append([int(x) for x in c])
    # z = t C with t in [0,1)^r
    lo = [sum(min(0, C[i][j]) for i in range(r)) for j in range(r)]
    hi = [sum(max(0, C[i][j]) for i in range(r)) for j in range(r)]
    size = _prod(h - l + 1 for l, h in zip(lo, hi))
    if size > max_box:
        raise CapExceededError(f"fundamental domain box of {size} points exceeds {max_box}")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(C)]
    red, _ = _rref(aug, 2 * r)
    Cinv = [row[r:] for row in red]
    count = 0
    for z in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        t = [sum(z[i] * Cinv[i][j] for i in range(r)) for j in range(r)]
        if all(0 <= x < 1 for x in t):
            count += 1
    return count


def exhaustive_essential(collection: SupportCollection, max_k: int = 16) -> tuple[int, IndexSubset]:
    """Minimal defect and essential subcollection from a full, unpruned scan."""
    k, n = collection.k, collection.ambient_dim
    if k > max_k:
        raise CapExceededError(f"exhaustive scan limited to {max_k} supports")
    defects = {}
    for size in range(k + 1):
        for J in itertools.combinations(range(k), size):
            diffs = [
                [a - b for a, b in zip(p, collection.supports[i][0])]
                for i in J
                for p in collection.supports[i]
            ]
            defects[J] = (rational_rank(diffs, n) if diffs else 0) - size
    d = min(defects.values())
    if d == 0:
        return 0, ()
    achievers = [J for J, v in defects.items() if v == d]
    minimal = [J for J in achievers if not any(set(I) < set(J) for I in achievers)]
    if len(minimal) != 1:
        raise InternalInvariantError(f"several minimal achievers {minimal}")
    return d, minimal[0]


# -- random instances ---------------------------------------------------------------


def random_collection(rng: random.Random, max_dim=4, max_supports=5, bound=3, max_size=4) -> SupportCollection:
    n = rng.randint(1, max_dim)
    k = rng.randint(1, max_supports)
    supports = []
    for _ in range(k):
        size = rng.randint(1, max_size)
        supports.append({tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(size)})
    return SupportCollection.from_points([sorted(s) for s in supports], n)


def random_polytope(rng: random.Random, m: int, lo=0, hi=4, max_points=None) -> LatticePolytope:
    npts = rng.randint(1, max_points or m + 3)
    return convex_hull([tuple(rng.randint(lo, hi) for _ in range(m)) for _ in range(npts)], ambient_dim=m)


def random_unimodular(rng: random.Random, n: int, steps: int = 4) -> IntegerMatrix:
    """Product of random elementary integer matrices and signed permutations."""
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    a = [a[p] for p in perm]
    for i in range(n):
        if rng.random() < 0.5:
            a[i] = [-x for x in a[i]]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        q = rng.choice([-1, 1])
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
    return IntegerMatrix.from_rows(a, n)


def random_sublattice_pair(rng: random.Random, max_dim=4, max_rank=3, max_index=10**4):
    """A random lattice ``G`` and its saturation, with ``[sat(G) : G] <= max_index``."""
    while True:
        n = rng.randint(1, max_dim)
        r = rng.randint(1, min(max_rank, n))
        gens = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(r + rng.randint(0, 1))]
        G = SublatticeBasis.from_generators(n, gens)
        if not 1 <= G.rank <= max_rank:
            continue
        L = saturation(G)
        if lattice_index(G, L) <= max_index:
            return G, L


# -- batch checks used by the CLI ---------------------------------------------------


@dataclass
class CheckResult:
    name: str
    instances: int
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "instances": self.instances, "passed": self.passed, "failures": self.failures}


def _run(name, count, seed, body: Callable[[random.Random], dict | None]) -> CheckResult:
    res = CheckResult(name, count)
    for i in range(count):
        bad = body(instance_rng(seed, name, i))
        if bad is not None:
            res.failures.append({"instance": i, **bad})
    return res


def run_checks(config: OracleConfig = OracleConfig()) -> list[CheckResult]:
    """Cross-check every primary routine against its oracle on seeded random instances."""
    dim = min(config.dimension_cap, 3)
    bound = config.coordinate_bound
    size = config.support_size_cap

    def bkk(rng):
        m = rng.randint(1, dim)
        Ps = [random_polytope(rng, m, 0, bound, size) for _ in range(m)]
        a, b = bkk_number(Ps), mixed_volume_by_interpolation(Ps)
        if a != b:
            return {"polytopes": [[list(v) for v in P.vertices] for P in Ps], "bkk_number": a, "oracle": b}

    def volume(rng):
        m = rng.randint(1, dim)
        P = random_polytope(rng, m, 0, bound, size)
        a, b = lattice_volume(P), ehrhart_volume(P)
        if a != b:
            return {"vertices": [list(v) for v in P.vertices], "lattice_volume": str(a), "oracle": str(b)}

    def index(rng):
        G, L = random_sublattice_pair(rng)
        a, b = lattice_index(G, L), index_by_fundamental_domain(G, L)
        if a != b:
            return {"G": G.basis.tolist(), "L": L.basis.tolist(), "lattice_index": a, "oracle": b}

    def essential(rng):
        A = random_collection(rng, max(config.dimension_cap, 1), 5, bound, size)
        a = (minimal_defect(A), essential_subcollection(A))
        b = exhaustive_essential(A)
        if a != b:
            return {"collection": A.to_lists(), "primary": list(a), "oracle": list(b)}

    count = config.instance_count
    return [
        _run("bkk_vs_interpolation", count, config.random_seed, bkk),
        _run("volume_vs_ehrhart", count, config.random_seed, volume),
        _run("index_vs_fundamental_domain", count, config.random_seed, index),
        _run("essential_vs_exhaustive", count, config.random_seed, essential),
    ]

