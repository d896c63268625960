"""Newton polyhedra of lattice supports: facets, weights, Hodge data.

Also houses the small exact-geometry toolkit (affine lattice charts,
brute-force facet enumeration, pulling triangulation, hull membership)
that the decomposition machinery builds on. All coordinates are integers
or ``fractions.Fraction``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb, gcd, lcm

from . import exactmath as xm
from .errors import DegenerateInput, IncomparablePolygons, NotFullDimensional

LatticePoint = xm.LatticePoint

# Bounding-box scans refuse to enumerate more points than this.
ENUMERATION_LIMIT = 5_000_000


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _sub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def affine_rank(points) -> int:
    """Dimension of the affine hull of a point set."""
    pts = list(points)
    if len(pts) <= 1:
        return 0
    base = pts[0]
    return xm.rational_rank([_sub(p, base) for p in pts[1:]])


def cross_normal(vectors, n: int) -> LatticePoint:
    """Integer vector orthogonal to n-1 vectors in Z^n (signed maximal minors).

    Zero exactly when the vectors do not span an (n-1)-dimensional space.
    """
    if n == 1:
        return (1,)
    out = []
    for j in range(n):
        minor = [[v[i] for i in range(n) if i != j] for v in vectors]
        d = xm.determinant(xm.IntMatrix.from_rows(minor))
        out.append(d if j % 2 == 0 else -d)
    return tuple(out)


class AffineChart:
    """Unimodular affine coordinates on the lattice of an affine subspace.

    Maps the affine sublattice through the given points isomorphically onto
    Z^dim, preserving normalized volumes; used to do exact geometry inside
    a facet at its intrinsic dimension.
    """

    def __init__(self, points):
        pts = [tuple(int(c) for c in p) for p in points]
        if not pts:
            raise DegenerateInput("chart needs at least one point")
        self.base = pts[0]
        ambient = len(self.base)
        diffs = [_sub(p, self.base) for p in pts[1:]]
        if diffs:
            rows = [[d[i] for d in diffs] for i in range(ambient)]
            p_rows, _, _, rank = xm.smith_engine(rows)
            self._fwd = xm.IntMatrix.from_rows(p_rows)
            self.dim = rank
        else:
            self._fwd = xm.IntMatrix.identity(ambient)
            self.dim = 0
        self._bwd = xm.unimodular_inverse(self._fwd)

    def to_local(self, point) -> LatticePoint:
        v = self._fwd.mul_vector(_sub(point, self.base))
        if any(c != 0 for c in v[self.dim:]):
            raise DegenerateInput("point is off the chart's subspace")
        return tuple(v[: self.dim])

    def from_local(self, local) -> LatticePoint:
        full = tuple(local) + (0,) * (len(self.base) - self.dim)
        return tuple(b + c for b, c in zip(self.base, self._bwd.mul_vector(full)))


def affine_facets(points) -> list[tuple[LatticePoint, int]]:
    """Facets of the hull of full-dimensional lattice points in Z^d.

    Returns primitive pairs (a, b) with a.x <= b valid on the hull and
    equality exactly on the facet, found by brute force over d-subsets.
    """
    pts = [tuple(int(c) for c in p) for p in dict.fromkeys(map(tuple, points))]
    d = len(pts[0])
    if affine_rank(pts) != d:
        raise DegenerateInput("facet enumeration needs a full-dimensional hull")
    if d == 1:
        vals = [p[0] for p in pts]
        return [((1,), max(vals)), ((-1,), -min(vals))]
    found = {}
    for subset in itertools.combinations(pts, d):
        base = subset[0]
        a = cross_normal([_sub(p, base) for p in subset[1:]], d)
        if all(c == 0 for c in a):
            continue
        b = _dot(a, base)
        side = [_dot(a, p) - b for p in pts]
        if all(s <= 0 for s in side):
            pass
        elif all(s >= 0 for s in side):
            a = tuple(-c for c in a)
            b = -b
        else:
            continue
        g = 0
        for c in a:
            g = gcd(g, abs(c))
        a = tuple(c // g for c in a)
        b = b // g
        found[(a, b)] = True
    return sorted(found)


def in_hull(points, x) -> bool:
    """Exact membership of x in the convex hull of the given points."""
    lifted = [tuple(p) + (1,) for p in points]
    return xm.lp_min_sum(lifted, tuple(x) + (1,)) is not None


def _bounding_box(points):
    los = [min(p[i] for p in points) for i in range(len(points[0]))]
    his = [max(p[i] for p in points) for i in range(len(points[0]))]
    size = 1
    for lo, hi in zip(los, his):
        size *= hi - lo + 1
    if size > ENUMERATION_LIMIT:
        raise DegenerateInput(f"enumeration box of {size} points is too large")
    return [range(lo, hi + 1) for lo, hi in zip(los, his)]


def hull_lattice_points(points) -> list[LatticePoint]:
    """All lattice points of the convex hull, by bounding-box scan."""
    return sorted(u for u in itertools.product(*_bounding_box(points)) if in_hull(points, u))


def interior_lattice_points(points) -> list[LatticePoint]:
    """Lattice points strictly inside a full-dimensional hull in Z^d."""
    facets = affine_facets(points)
    out = []
    for u in itertools.product(*_bounding_box(points)):
        if all(_dot(a, u) < b for a, b in facets):
            out.append(u)
    return sorted(out)


def triangulate(points) -> list[tuple[LatticePoint, ...]]:
    """Pulling triangulation of a full-dimensional lattice polytope in Z^d.

    Recursively cones the lexicographically least vertex over the facets
    that do not contain it; interior points are simply not used, which is
    fine for the volume computations this feeds.
    """
    pts = sorted(dict.fromkeys(map(tuple, points)))
    d = len(pts[0])
    if affine_rank(pts) != d:
        raise DegenerateInput("triangulation needs a full-dimensional hull")
    if len(pts) == d + 1:
        return [tuple(pts)]
    if d == 1:
        return [(pts[0], pts[-1])]
    v0 = pts[0]
    simplices = []
    for a, b in affine_facets(pts):
        if _dot(a, v0) == b:
            continue
        face_pts = [p for p in pts if _dot(a, p) == b]
        chart = AffineChart(face_pts)
        local = {chart.to_local(p): p for p in face_pts}
        for sub in triangulate(list(local)):
            simplices.append((v0,) + tuple(local[q] for q in sub))
    return simplices


def normalized_volume(points) -> int:
    """n! times the Euclidean volume of the hull, an exact integer."""
    total = 0
    for simplex in triangulate(points):
        m = xm.IntMatrix.from_columns([_sub(p, simplex[0]) for p in simplex[1:]])
        total += abs(xm.determinant(m))
    return total


# ---------------------------------------------------------------------------
# Newton polyhedron of a support set


@dataclass(frozen=True)
class Support:
    """Nonzero lattice exponent vectors spanning the ambient space."""

    dim: int
    points: tuple[LatticePoint, ...]

    def __post_init__(self):
        pts = tuple(tuple(int(c) for c in p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise DegenerateInput("support is empty")
        if any(len(p) != self.dim for p in pts):
            raise DegenerateInput("support points have inconsistent dimension")
        if any(all(c == 0 for c in p) for p in pts):
            raise DegenerateInput("origin is not allowed as a support point")
        if len(set(pts)) != len(pts):
            raise DegenerateInput("support points must be distinct")
        if xm.rational_rank(pts) != self.dim:
            raise NotFullDimensional(
                "support together with the origin does not span the ambient space"
            )


@dataclass(frozen=True)
class Facet:
    """Codimension-1 face away from the origin, as the hyperplane e.x = 1."""

    normal: tuple[Fraction, ...]
    local_denominator: int
    vertex_indices: tuple[int, ...]


@dataclass(frozen=True)
class LowerPolygon:
    """Lower-convex polygon through (0,0), stored as its sorted slope multiset.

    Vertex list and slope multiset interconvert losslessly; equality is
    equality of the canonical representation.
    """

    slopes: tuple[Fraction, ...]

    def __post_init__(self):
        slopes = tuple(Fraction(s) for s in self.slopes)
        object.__setattr__(self, "slopes", slopes)
        if any(slopes[i] > slopes[i + 1] for i in range(len(slopes) - 1)):
            raise DegenerateInput("slopes must be non-decreasing")

    @classmethod
    def from_slopes(cls, slopes) -> "LowerPolygon":
        return cls(tuple(sorted(Fraction(s) for s in slopes)))

    @classmethod
    def from_vertices(cls, vertices) -> "LowerPolygon":
        verts = [(Fraction(x), Fraction(y)) for x, y in vertices]
        if not verts or verts[0] != (0, 0):
            raise DegenerateInput("polygon must start at the origin")
        slopes = []
        for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
            run = x1 - x0
            if run == 0 and y1 == y0:
                continue
            if run <= 0 or run.denominator != 1:
                raise DegenerateInput("abscissae must increase by positive integers")
            slopes.extend([(y1 - y0) / run] * int(run))
        return cls.from_slopes(slopes)

    @property
    def length(self) -> int:
        return len(self.slopes)

    def cumulative(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)]
        for s in self.slopes:
            out.append(out[-1] + s)
        return tuple(out)

    @property
    def vertices(self) -> tuple[tuple[Fraction, Fraction], ...]:
        verts = [(Fraction(0), Fraction(0))]
        x, y = Fraction(0), Fraction(0)
        for s, group in itertools.groupby(self.slopes):
            count = len(list(group))
            x += count
            y += count * s
            verts.append((x, y))
        return tuple(verts)

    @property
    def endpoint(self) -> tuple[Fraction, Fraction]:
        return self.vertices[-1]


class Dominance(Enum):
    ABOVE = "above"
    ABOVE_STRICT_SOMEWHERE = "above_strict_somewhere"
    VIOLATION = "violation"


@dataclass(frozen=True)
class PolygonComparison:
    status: Dominance
    endpoints_coincide: bool
    witness: tuple[int, Fraction, Fraction] | None = None

    @property
    def is_above(self) -> bool:
        return self.status is not Dominance.VIOLATION


def lies_above(upper: LowerPolygon, lower: LowerPolygon) -> PolygonComparison:
    """Pointwise comparison of two lower polygons sharing an endpoint abscissa.

    Both polygons have breakpoints only at integer abscissae, so comparing
    the cumulative slope sums at every integer decides the order everywhere.
    """
    if upper.length != lower.length:
        raise IncomparablePolygons(
            f"polygon lengths differ: {upper.length} vs {lower.length}"
        )
    cu = upper.cumulative()
    cl = lower.cumulative()
    strict = False
    for k, (a, b) in enumerate(zip(cu, cl)):
        if a < b:
            return PolygonComparison(Dominance.VIOLATION, cu[-1] == cl[-1], (k, a, b))
        if a > b:
            strict = True
    status = Dominance.ABOVE_STRICT_SOMEWHERE if strict else Dominance.ABOVE
    return PolygonComparison(status, cu[-1] == cl[-1])


@dataclass(frozen=True)
class HodgeData:
    """Weight counts W(k), their alternating corrections H(k), and the polygon."""

    W: dict[int, int]
    H: dict[int, int]
    polygon: LowerPolygon


@dataclass
class NewtonPolyhedron:
    """Hull of a support set with the origin, with its away-facet data."""

    support: Support
    facets_away_from_origin: tuple[Facet, ...]
    denominator: int
    normalized_volume: int
    cone_normals: tuple[LatticePoint, ...]
    _hodge: HodgeData | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.support.dim

    def in_cone(self, u) -> bool:
        return all(_dot(g, u) >= 0 for g in self.cone_normals)

    def _weight_by_facets(self, u) -> Fraction | None:
        if not self.in_cone(u):
            return None
        if all(c == 0 for c in u):
            return Fraction(0)
        w = max(_dot(f.normal, u) for f in self.facets_away_from_origin)
        return Fraction(w)

    def weight(self, u) -> Fraction | None:
        """Smallest c >= 0 with u in c*hull; None when u is outside the cone.

        Computed from the facet equations, cross-checked in debug mode
        against the independent linear program over the support.
        """
        u = tuple(int(c) for c in u)
        w = self._weight_by_facets(u)
        assert w == xm.lp_min_sum(self.support.points, u)
        return w

    def hodge_data(self) -> HodgeData:
        """Counts of lattice points by weight and the resulting lower polygon.

        W(k) counts lattice points of weight k/D by scanning the bounding box
        of the n-fold dilation; H(k) applies the alternating binomial
        correction and must sum to the normalized volume.
        """
        if self._hodge is not None:
            return self._hodge
        n = self.dim
        d = self.denominator
        kmax = n * d
        verts = list(self.support.points) + [(0,) * n]
        los = [n * min(p[i] for p in verts) for i in range(n)]
        his = [n * max(p[i] for p in verts) for i in range(n)]
        size = 1
        for lo, hi in zip(los, his):
            size *= hi - lo + 1
        if size > ENUMERATION_LIMIT:
            raise DegenerateInput(f"enumeration box of {size} points is too large")
        ranges = [range(lo, hi + 1) for lo, hi in zip(los, his)]
        w_counts = {k: 0 for k in range(kmax + 1)}
        for u in itertools.product(*ranges):
            w = self._weight_by_facets(u)
            if w is None or w > n:
                continue
            scaled = w * d
            assert scaled.denominator == 1
            w_counts[int(scaled)] += 1
        h_counts = {}
        for k in range(kmax + 1):
            h = sum(
                (-1) ** i * comb(n, i) * w_counts.get(k - i * d, 0)
                for i in range(n + 1)
            )
            assert h >= 0
            h_counts[k] = h
        assert sum(h_counts.values()) == self.normalized_volume
        slopes = []
        for k in range(kmax + 1):
            slopes.extend([Fraction(k, d)] * h_counts[k])
        self._hodge = HodgeData(w_counts, h_counts, LowerPolygon.from_slopes(slopes))
        return self._hodge

    def hodge_polygon(self) -> LowerPolygon:
        return self.hodge_data().polygon

    def cofacial(self, u, u2) -> bool:
        """Whether the rays of u and u2 meet a common closed away-facet.

        Equivalent to additivity of the weight at u + u2, which is verified
        in debug mode.
        """
        u = tuple(int(c) for c in u)
        u2 = tuple(int(c) for c in u2)
        w1 = self._weight_by_facets(u)
        w2 = self._weight_by_facets(u2)
        if w1 is None or w2 is None:
            raise DegenerateInput("cofaciality needs both points inside the cone")
        if w1 == 0 or w2 == 0:
            raise DegenerateInput("cofaciality is not defined at the origin")
        shared = any(
            _dot(f.normal, u) == w1 and _dot(f.normal, u2) == w2
            for f in self.facets_away_from_origin
        )
        assert shared == (self._weight_by_facets(_add(u, u2)) == w1 + w2)
        return shared


def _cone_facet_normals(points, n: int) -> tuple[LatticePoint, ...]:
    if n == 1:
        pos = any(p[0] > 0 for p in points)
        neg = any(p[0] < 0 for p in points)
        if pos and neg:
            return ()
        return ((1,),) if pos else ((-1,),)
    found = {}
    for subset in itertools.combinations(points, n - 1):
        g = cross_normal(subset, n)
        if all(c == 0 for c in g):
            continue
        side = [_dot(g, p) for p in points]
        if all(s >= 0 for s in side):
            found[xm.primitive_vector(g)] = True
        elif all(s <= 0 for s in side):
            found[xm.primitive_vector(tuple(-c for c in g))] = True
    return tuple(sorted(found))


def build(support: Support) -> NewtonPolyhedron:
    """Newton polyhedron of a support: away-facets, denominator, volume.

    Away-facets are found by brute force: every n-subset of support points
    that is linearly independent determines a candidate hyperplane e.x = 1,
    kept iff the whole support lies on its origin side.
    """
    n = support.dim
    pts = support.points
    facets = {}
    for subset in itertools.combinations(range(len(pts)), n):
        rows = [pts[i] for i in subset]
        m = xm.IntMatrix.from_rows(rows)
        if xm.determinant(m) == 0:
            continue
        e = xm.solve_unique(m, (1,) * n)
        values = [_dot(e, p) for p in pts]
        if any(v > 1 for v in values):
            continue
        if e not in facets:
            incident = tuple(i for i, v in enumerate(values) if v == 1)
            denom = lcm(*(c.denominator for c in e))
            facets[e] = Facet(e, denom, incident)
    if not facets:
        raise NotFullDimensional("no codimension-1 face avoids the origin")
    ordered = tuple(facets[e] for e in sorted(facets))
    denominator = lcm(*(f.local_denominator for f in ordered))
    volume = normalized_volume(list(pts) + [(0,) * n])
    return NewtonPolyhedron(
        support=support,
        facets_away_from_origin=ordered,
        denominator=denominator,
        normalized_volume=volume,
        cone_normals=_cone_facet_normals(pts, n),
    )
