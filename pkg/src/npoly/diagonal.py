"""Exact slope data for supports with exactly n points and a nonsingular
vertex matrix.

The rational solutions of M*r = 0 (mod 1) in [0,1)^n form a finite abelian
group of order |det M|. Multiplication by an integer m coprime to that order
permutes the group; the orbit structure under the prime p determines the
exact p-adic valuations of the reciprocal zeros of the associated
L-function, with each orbit of size d contributing its mean coordinate-sum
as a slope of multiplicity d. Norm stability under the p-action is
equivalent to the valuations meeting their combinatorial lower bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

from . import exactmath as xm
from . import polytope as pt
from .errors import DegenerateInput, DegenerateMatrix, NotCoprime, NotIndecomposable


@dataclass(frozen=True, order=True)
class GroupElement:
    """One solution r of M*r = 0 (mod 1), with its coordinate sum and order."""

    r: tuple[Fraction, ...]
    norm: Fraction
    order: int


@dataclass(frozen=True)
class Orbit:
    representative: GroupElement
    members: tuple[GroupElement, ...]
    degree: int
    slope: Fraction


@dataclass(frozen=True)
class OrdinaryVerdict:
    ordinary: bool
    witness: GroupElement | None


@dataclass(frozen=True)
class ResidueClassification:
    """Residues m mod d_n whose action preserves the norm, and their count."""

    modulus: int
    classes: tuple[int, ...]
    mu: int


@dataclass(frozen=True)
class DenominatorRelation:
    denominator: int
    largest_invariant_factor: int
    divides: bool


def _element(r) -> GroupElement:
    r = tuple(Fraction(x) for x in r)
    order = lcm(*(x.denominator for x in r))
    return GroupElement(r=r, norm=sum(r, Fraction(0)), order=order)


@dataclass(eq=False)
class DiagonalSimplex:
    """Support of exactly n points whose vertex matrix is nonsingular."""

    matrix: xm.IntMatrix
    snf: xm.SnfResult
    polyhedron: pt.NewtonPolyhedron
    det: int

    @classmethod
    def from_matrix(cls, matrix: xm.IntMatrix) -> "DiagonalSimplex":
        if not matrix.is_square:
            raise DegenerateMatrix("vertex matrix must be square")
        det = xm.determinant(matrix)
        if det == 0:
            raise DegenerateMatrix("vertex matrix is singular")
        support = pt.Support(matrix.rows, tuple(matrix.columns()))
        ds = cls(
            matrix=matrix,
            snf=xm.snf(matrix),
            polyhedron=pt.build(support),
            det=det,
        )
        assert abs(det) == ds.polyhedron.normalized_volume
        assert ds.snf.diag[-1] % ds.polyhedron.denominator == 0
        return ds

    @classmethod
    def from_support(cls, support: pt.Support) -> "DiagonalSimplex":
        if len(support.points) != support.dim:
            raise DegenerateInput(
                "need exactly n support points for the n-dimensional group construction"
            )
        return cls.from_matrix(xm.IntMatrix.from_columns(support.points))

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def group_order(self) -> int:
        return abs(self.det)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.snf.diag

    @property
    def largest_invariant_factor(self) -> int:
        return self.snf.diag[-1]

    @cached_property
    def group(self) -> tuple[GroupElement, ...]:
        """All solutions r of M*r = 0 (mod 1) in [0,1)^n, sorted.

        Enumerated through the Smith decomposition: with P*M*Q diagonal, the
        solutions are exactly the fractional parts of Q*s for s ranging over
        products of the cyclic factors.
        """
        elements = []
        for combo in itertools.product(*(range(d) for d in self.snf.diag)):
            s = [Fraction(a, d) for a, d in zip(combo, self.snf.diag)]
            r = tuple(x % 1 for x in self.snf.Q.mul_vector(s))
            elements.append(_element(r))
        elements.sort(key=lambda e: (e.norm, e.r))
        assert len({e.r for e in elements}) == self.group_order
        assert all(
            all(c.denominator == 1 for c in self.matrix.mul_vector(e.r))
            for e in elements
        )
        return tuple(elements)


def group_elements(ds: DiagonalSimplex) -> tuple[GroupElement, ...]:
    return ds.group


def m_action(element: GroupElement, m: int) -> GroupElement:
    """Componentwise fractional part of m*r; needs m coprime to the order."""
    if gcd(m, element.order) != 1:
        raise NotCoprime(f"{m} shares a factor with the element order {element.order}")
    return _element(tuple((m * x) % 1 for x in element.r))


def m_degree(element: GroupElement, m: int) -> int:
    """Smallest d >= 1 with (m**d - 1)*r integral: the order of m mod order(r)."""
    if gcd(m, element.order) != 1:
        raise NotCoprime(f"{m} shares a factor with the element order {element.order}")
    d = 1
    power = m % element.order if element.order > 1 else 0
    while element.order > 1 and power != 1:
        power = power * m % element.order
        d += 1
    return d


def orbits(ds: DiagonalSimplex, p: int) -> tuple[Orbit, ...]:
    """Partition of the group under r -> {p*r}, sorted by (slope, representative)."""
    if gcd(p, ds.group_order) != 1:
        raise NotCoprime(f"{p} divides the group order {ds.group_order}")
    remaining = {e.r: e for e in ds.group}
    out = []
    for e in ds.group:
        if e.r not in remaining:
            continue
        members = []
        cur = e
        while cur.r in remaining:
            members.append(remaining.pop(cur.r))
            cur = m_action(cur, p)
        slope = sum((m.norm for m in members), Fraction(0)) / len(members)
        orbit = Orbit(
            representative=members[0],
            members=tuple(members),
            degree=len(members),
            slope=slope,
        )
        assert orbit.degree == m_degree(orbit.representative, p)
        out.append(orbit)
    out.sort(key=lambda o: (o.slope, o.representative.r))
    return tuple(out)


def orbit_slope(orbit: Orbit, p: int) -> Fraction:
    """Mean coordinate-sum along the orbit, recomputed by walking the action."""
    total = Fraction(0)
    cur = orbit.representative
    for _ in range(orbit.degree):
        total += cur.norm
        cur = m_action(cur, p)
    if cur.r != orbit.representative.r:
        raise DegenerateInput("orbit is not closed under the given prime")
    return total / orbit.degree


def digit_sum(k: int, p: int) -> int:
    total = 0
    while k:
        total += k % p
        k //= p
    return total


def stickelberger_ord(k: int, p: int, q: int | None = None) -> Fraction:
    """Valuation of the k-th Gauss sum: base-p digit sum of k over p - 1."""
    if k < 0 or (q is not None and k > q - 2):
        raise DegenerateInput(f"index {k} outside the valid range")
    return Fraction(digit_sum(k, p), p - 1)


def slope_from_digit_sums(element: GroupElement, p: int) -> Fraction:
    """Orbit slope of an element computed purely from base-p digit sums.

    Independent oracle for the fractional-part walk: with d the orbit degree
    and q = p**d, each coordinate r_i contributes the valuation of the Gauss
    sum indexed by r_i*(q-1), and the slope is the average over the orbit.
    """
    d = m_degree(element, p)
    q = p**d
    total = Fraction(0)
    for x in element.r:
        k = x * (q - 1)
        assert k.denominator == 1
        total += stickelberger_ord(int(k), p, q)
    return total / d


def newton_polygon_diag(ds: DiagonalSimplex, p: int) -> pt.LowerPolygon:
    """Exact slope multiset: each orbit contributes its slope with its degree."""
    slopes = []
    for orbit in orbits(ds, p):
        slopes.extend([orbit.slope] * orbit.degree)
    return pt.LowerPolygon.from_slopes(slopes)


def hodge_counts_diag(ds: DiagonalSimplex) -> dict[int, int]:
    """H(k) from the group directly: elements of norm k/D, no box scan."""
    d = ds.polyhedron.denominator
    counts: dict[int, int] = {}
    for e in ds.group:
        scaled = e.norm * d
        assert scaled.denominator == 1
        counts[int(scaled)] = counts.get(int(scaled), 0) + 1
    return counts


def hodge_polygon_diag(ds: DiagonalSimplex) -> pt.LowerPolygon:
    return pt.LowerPolygon.from_slopes([e.norm for e in ds.group])


def is_ordinary(ds: DiagonalSimplex, p: int) -> OrdinaryVerdict:
    """Norm stability under the p-action, with the first violator as witness."""
    if gcd(p, ds.group_order) != 1:
        raise NotCoprime(f"{p} divides the group order {ds.group_order}")
    for e in ds.group:
        if m_action(e, p).norm != e.norm:
            return OrdinaryVerdict(False, e)
    return OrdinaryVerdict(True, None)


def ordinary_residues(ds: DiagonalSimplex) -> ResidueClassification:
    """Residues mod d_n whose action is norm-stable.

    Stability under one application suffices: the action is a bijection, so a
    single stable step propagates along the whole orbit. Any prime p coprime
    to det M acts exactly as p mod d_n does.
    """
    dn = ds.largest_invariant_factor
    stable = []
    for m in range(1, dn + 1):
        if gcd(m, dn) != 1:
            continue
        if all(m_action(e, m).norm == e.norm for e in ds.group):
            stable.append(m)
    return ResidueClassification(dn, tuple(stable), len(stable))


def denominator_divides(ds: DiagonalSimplex) -> DenominatorRelation:
    """The facet-equation denominator divides the largest invariant factor.

    The away-facet normal is the unique solution e of e*M = (1,...,1); its
    entries land in (1/d_n)*Z, so the denominator divides d_n.
    """
    ones = (1,) * ds.dim
    e = xm.solve_unique(ds.matrix.transpose(), ones)
    dn = ds.largest_invariant_factor
    if any((c * dn).denominator != 1 for c in e):
        raise AssertionError("facet equation does not clear the invariant factor")
    den = lcm(*(c.denominator for c in e))
    assert den == ds.polyhedron.denominator
    return DenominatorRelation(den, dn, dn % den == 0)


def check_indecomposable_equality(ds: DiagonalSimplex) -> bool:
    """For n <= 3 and a vertex-only away-facet, the denominator equals d_n."""
    if ds.dim > 3:
        raise DegenerateInput("equality is only guaranteed in ambient dimension <= 3")
    vertices = set(ds.matrix.columns())
    every = pt.hull_lattice_points(list(vertices) + [(0,) * ds.dim])
    on_face = {u for u in every if ds.polyhedron.weight(u) == 1}
    if on_face != vertices:
        raise NotIndecomposable(
            "away-facet carries lattice points other than the vertices"
        )
    return ds.polyhedron.denominator == ds.largest_invariant_factor
