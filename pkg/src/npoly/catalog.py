"""Constructors for the named support families, with checkable facts attached.

Each family records a handful of exact expected values (facet denominator,
L-function degree, invariant factors, ...) that the test suite recomputes
through the geometry and group machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm

from . import decompose as dc
from . import diagonal as dg
from . import exactmath as xm
from . import polytope as pt
from .errors import DegenerateInput

Fact = tuple[str, object]


@dataclass(frozen=True)
class NamedFamily:
    name: str
    parameters: tuple[tuple[str, object], ...]
    support: pt.Support
    expected_facts: tuple[Fact, ...]


def _unit(i: int, n: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def _intlist(value, name: str) -> tuple[int, ...]:
    try:
        out = tuple(int(v) for v in value)
    except TypeError as exc:
        raise DegenerateInput(f"{name} must be a list of integers") from exc
    if not out or any(v < 1 for v in out):
        raise DegenerateInput(f"{name} must be positive integers")
    return out


def _monomial(params):
    d = int(params["d"])
    if d < 1:
        raise DegenerateInput("degree must be positive")
    support = pt.Support(1, ((d,),))
    return support, (
        ("denominator", d),
        ("lfunction_degree", d),
        ("away_facet_count", 1),
        ("ordinary_classes", (1,)),
    )


def _kloosterman(params):
    n = int(params["n"])
    if n < 1:
        raise DegenerateInput("dimension must be positive")
    points = tuple(_unit(i, n) for i in range(n)) + ((-1,) * n,)
    support = pt.Support(n, points)
    return support, (
        ("denominator", 1),
        ("lfunction_degree", n + 1),
        ("away_facet_count", n + 1),
        ("ordinary_for_primes_below_50", True),
    )


def _generalized_kloosterman(params):
    n = int(params["n"])
    v = _intlist(params["v"], "v")
    if len(v) != n:
        raise DegenerateInput("v must have length n")
    points = tuple(_unit(i, n) for i in range(n)) + (tuple(-c for c in v),)
    support = pt.Support(n, points)
    return support, (
        ("denominator", 1),
        ("lfunction_degree", 1 + sum(v)),
        ("away_facet_count", n + 1),
        ("dstar", lcm(*v)),
    )


def _two_sided(params):
    n = int(params["n"])
    u = _intlist(params["u"], "u")
    v = _intlist(params["v"], "v")
    if len(u) != n or len(v) != n:
        raise DegenerateInput("u and v must have length n")
    points = tuple(tuple(u[i] * c for c in _unit(i, n)) for i in range(n))
    points += (tuple(-c for c in v),)
    support = pt.Support(n, points)
    return support, (("away_facet_count", n + 1),)


def _inverted(params):
    n = int(params["n"])
    v = _intlist(params["v"], "v")
    if len(v) != n:
        raise DegenerateInput("v must have length n")
    points = tuple(_unit(i, n) for i in range(n)) + (tuple(v),)
    if points[-1] in points[:-1]:
        raise DegenerateInput("v coincides with a unit vector")
    support = pt.Support(n, points)
    return support, (("lfunction_degree", sum(v)),)


def _bi_kloosterman(params):
    n = int(params["n"])
    if n < 2:
        raise DegenerateInput("two-sided family needs n >= 2")
    u = _intlist(params["u"], "u")
    v = _intlist(params["v"], "v")
    if len(u) != n or len(v) != n:
        raise DegenerateInput("u and v must have length n")
    points = tuple(_unit(i, n) for i in range(n))
    points += tuple(tuple(-c for c in _unit(i, n)) for i in range(n))
    points += (tuple(-c for c in u), tuple(v))
    support = pt.Support(n, tuple(dict.fromkeys(points)))
    facts = [("lfunction_degree", sum(u) + sum(v) + 2**n - 2)]
    if all(c == 1 for c in u) and all(c == 1 for c in v):
        facts.append(("denominator", 1))
        if n == 2:
            # in higher dimensions adjacent triangular faces merge into
            # quadrilaterals, so the naive face count only holds here
            facts.append(("away_facet_count", 2**n + 2 * n - 2))
            facts.append(("ordinary_for_primes_below_50", True))
        if n <= 3:
            facts.append(("dstar", 1))
    return support, tuple(facts)


def _box(params):
    dims = _intlist(params["dims"], "dims")
    n = len(dims)
    points = tuple(
        tuple(c) + (1,)
        for c in itertools.product(*(range(d + 1) for d in dims))
    )
    support = pt.Support(n + 1, points)
    facts = [
        ("denominator", 1),
        ("away_facet_count", 1),
        ("lfunction_degree", _factorial(n) * _product(dims)),
    ]
    if all(d == 1 for d in dims):
        facts.append(("dstar", 1))
    return support, tuple(facts)


def _dilated_simplex(params):
    n = int(params["n"])
    d = int(params["d"])
    height = int(params.get("D", 1))
    if n < 1 or d < 1 or height < 1:
        raise DegenerateInput("need n, d, D >= 1")
    points = []
    for c in itertools.product(range(d + 1), repeat=n):
        if sum(c) <= d:
            points.append(tuple(c) + (height,))
    support = pt.Support(n + 1, tuple(points))
    facts = [
        ("denominator", height),
        ("away_facet_count", 1),
        ("lfunction_degree", height * d**n),
    ]
    if n == 2:
        facts.append(("dstar", height))
    return support, tuple(facts)


def _five_dim(params):
    support = dc.build_counterexample("five_dim")
    return support, (
        ("denominator", 1),
        ("det_abs", 3),
        ("hodge_counts", ((0, 1), (2, 1), (3, 1))),
        ("ordinary_classes", (1,)),
    )


def _extend_dim(params):
    n = int(params["n"])
    support = dc.build_counterexample("extend_dim", n=n)
    return support, (("denominator", 1), ("det_abs", 3), ("ordinary_classes", (1,)))


def _four_dim(params):
    big_d = int(params["D"])
    k = int(params["k"])
    support = dc.build_counterexample("four_dim", D=big_d, k=k)
    return support, (
        ("denominator", big_d),
        ("largest_invariant_factor", big_d**k),
        ("det_abs", big_d ** (k + 1)),
    )


def _product(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


_BUILDERS = {
    "monomial": _monomial,
    "kloosterman": _kloosterman,
    "generalized_kloosterman": _generalized_kloosterman,
    "two_sided": _two_sided,
    "inverted": _inverted,
    "bi_kloosterman": _bi_kloosterman,
    "box": _box,
    "dilated_simplex": _dilated_simplex,
    "five_dim": _five_dim,
    "extend_dim": _extend_dim,
    "four_dim": _four_dim,
}

FAMILY_NAMES = tuple(sorted(_BUILDERS))


def make(name: str, parameters=None) -> NamedFamily:
    params = dict(parameters or {})
    if name not in _BUILDERS:
        raise DegenerateInput(f"unknown family {name!r}; known: {FAMILY_NAMES}")
    try:
        support, facts = _BUILDERS[name](params)
    except KeyError as exc:
        raise DegenerateInput(f"family {name!r} is missing parameter {exc}") from exc
    return NamedFamily(
        name=name,
        parameters=tuple(sorted(params.items())),
        support=support,
        expected_facts=facts,
    )


def evaluate_fact(family: NamedFamily, kind: str):
    """Recompute one expected fact through the main machinery."""
    support = family.support
    if kind == "denominator":
        return pt.build(support).denominator
    if kind == "lfunction_degree":
        return pt.build(support).normalized_volume
    if kind == "away_facet_count":
        return len(pt.build(support).facets_away_from_origin)
    if kind == "det_abs":
        return abs(xm.determinant(xm.IntMatrix.from_columns(support.points)))
    if kind == "largest_invariant_factor":
        return dg.DiagonalSimplex.from_support(support).largest_invariant_factor
    if kind == "hodge_counts":
        data = pt.build(support).hodge_data()
        return tuple(sorted((k, h) for k, h in data.H.items() if h))
    if kind == "ordinary_classes":
        return dg.ordinary_residues(dg.DiagonalSimplex.from_support(support)).classes
    if kind == "dstar":
        pieces = dc.facial_decompose(support)
        return lcm(
            *(dc.complete_collapse(fp.restricted_support).dstar for fp in pieces)
        )
    if kind == "ordinary_for_primes_below_50":
        from . import errors
        from .primes import primes_below

        verdicts = []
        for p in primes_below(50):
            try:
                verdict = dc.ordinary_via_faces(support, p)
            except errors.NotCoprime:
                continue
            verdicts.append(verdict.status is dc.FacialStatus.ORDINARY)
        return all(verdicts) and bool(verdicts)
    raise DegenerateInput(f"unknown fact kind {kind!r}")


def check_family(family: NamedFamily) -> list[tuple[str, object, object, bool]]:
    """Recompute every fact; returns (kind, expected, actual, ok) rows."""
    rows = []
    for kind, expected in family.expected_facts:
        actual = evaluate_fact(family, kind)
        rows.append((kind, expected, actual, actual == expected))
    return rows
