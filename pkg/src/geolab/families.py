"""Spin and non-spin family instances, end to end.

A parameter tuple ``(variant, alpha, beta, d, p)`` determines the branch
divisor on ``Y_n`` (the blow-up of ``H`` at the 4-points and 3-points of the
elliptic arrangement): the elliptic curves ``Eps_i``, general fibres
``Eprime_i``, the curves ``N_i`` and general lines. :func:`build_family`
derives every count from the lattice and the incidence structure, runs the
root-cover formulas and cross-checks the result against the closed forms.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Tuple, Union

from . import hesse
from .errors import DomainError, InconsistencyError, SearchExhausted
from .logchern import ArrangementSummary, CurveFamily, SingularityClass, blow_up_class, log_chern_numbers
from .numtheory import c_coeff, hj_length, next_prime, node_q
from .params import DIRECTIONS, NONSPIN, SPIN, VARIANTS, FamilyParams
from .rootcover import (
    BranchSummary,
    SurfaceInvariants,
    chern_of_cover,
    dump_num,
    load_num,
    necessary_condition_report,
    node_type_table,
    strict_transform_selfint,
    surface_group,
)

__all__ = [
    "FamilyParams",
    "NodeCensus",
    "FamilyReport",
    "SlopeInversion",
    "TargetResult",
    "elliptic_arrangement",
    "elliptic_arrangement_counts",
    "arrangement_on_h",
    "arrangement_on_y",
    "node_census",
    "build_family",
    "poly_t2",
    "poly_t21",
    "poly_t22",
    "closed_log_chern",
    "limit_slope",
    "slope_interval",
    "invert_slope",
    "target_slope",
    "fiber_genus",
    "genus_base_change",
    "DEFAULT_PRIME_CEILING",
]

DEFAULT_PRIME_CEILING = 10 ** 7
FOUR = "4pts"
THREE = "3pts+N"
NODES = "nodes"

XValue = Union[Fraction, int, float, None]


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def poly_t2(params: FamilyParams) -> int:
    a, b, d, p = params.alpha, params.beta, params.d, params.p
    if params.spin:
        return (13824 * b**2 * a**2 * p**4 + 1152 * b**4 * p**4 + 4608 * d * a**2 * p**2
                + 768 * d * b**2 * p**2 + 32 * d**2 - 100 * d)
    return (108 * a**2 * b**2 * p**4 + 18 * b**4 * p**4 + 72 * d * a**2 * p**2
            - 25 * d + 24 * d * b**2 * p**2 + 2 * d**2)


def poly_t21(params: FamilyParams) -> int:
    a, b, d, p = params.alpha, params.beta, params.d, params.p
    if params.spin:
        return (384 * b**4 * p**4 + 4608 * a**2 * b**2 * p**4 + 2304 * d * a**2 * p**2
                - 52 * d + 384 * d * b**2 * p**2 + 16 * d**2)
    return (6 * b**4 * p**4 + 36 * a**2 * b**2 * p**4 + 36 * d * a**2 * p**2
            - 13 * d + 12 * d * b**2 * p**2 + d**2)


def poly_t22(params: FamilyParams) -> int:
    a, b, d, p = params.alpha, params.beta, params.d, params.p
    if params.spin:
        return (768 * b**4 * p**4 + 9216 * a**2 * b**2 * p**4 + 2304 * d * a**2 * p**2
                - 48 * d + 384 * d * b**2 * p**2 + 16 * d**2)
    return (12 * b**4 * p**4 + 72 * a**2 * b**2 * p**4 + 36 * d * a**2 * p**2
            - 12 * d + 12 * d * b**2 * p**2 + d**2)


def closed_log_chern(params: FamilyParams) -> Tuple[Fraction, Fraction]:
    n4 = Fraction(params.n) ** 4
    t2, d = poly_t2(params), params.d
    if params.spin:
        return n4 + 2 * t2 - 40 * d - 48, n4 / 3 + t2 - 16 * d - 12
    return n4 + 2 * t2 - 10 * d - 48, n4 / 3 + t2 - 4 * d - 12


def expected_node_types(params: FamilyParams) -> Dict[int, Tuple[Fraction, int]]:
    """Node types ``q`` with closed forms for ``c(q, m)`` and ``l(q, m)``."""
    p = params.p
    if params.spin:
        return {
            4 * p - 1: (Fraction(4 * p - 1, 2 * p), 4 * p - 1),
            2 * p + 1: (Fraction(2 * p * p + 1, 2 * p), 3),
        }
    return {p - 1: (Fraction(2 * p - 2, p), p - 1), 1: (Fraction(p * p - 2 * p + 2, p), 1)}


# ---------------------------------------------------------------------------
# The arrangement
# ---------------------------------------------------------------------------


def elliptic_arrangement_counts(n: int) -> Dict[str, int]:
    """Point and curve counts of the elliptic arrangement for ``n`` divisible by 3.

    Each curve upstairs carries ``n^2`` torsion 4-points. Downstairs, those
    on a curve through the fixed points become 3-points lying on an
    ``N``-curve; a curve of direction ``i`` meets ``N_j`` (``j != i``) in
    ``F_i . N_j`` of them. The rest stay 4-points.
    """
    if n < 3 or n % 3:
        raise DomainError(f"n must be a positive multiple of 3, got {n}")
    F = {i: hesse.named_class("F_i", i) for i in DIRECTIONS}
    Nj = {j: hesse.named_class("N_i", j) for j in DIRECTIONS}
    per_curve_3 = {i: sum(F[i].dot(Nj[j]) for j in DIRECTIONS if j != i) for i in DIRECTIONS}
    if len(set(per_curve_3.values())) != 1:
        raise InconsistencyError("direction symmetry of 3-point incidences")
    three_per_curve = per_curve_3["0"]
    curves = (n * n - 3) // 3
    four_per_curve = n * n - three_per_curve
    # one curve of each direction through every 4-point
    t4 = curves * four_per_curve
    # a 3-point on N_j lies on one curve of each other direction
    on_nj = curves * F["0"].dot(Nj["1"])
    t3 = 4 * on_nj
    per_n_curve = on_nj // len(build_n_curves("0"))
    return {
        "curves_per_direction": curves,
        "four_per_curve": four_per_curve,
        "three_per_curve": three_per_curve,
        "three_per_n_curve": per_n_curve,
        "t4": t4,
        "t3": t3,
    }


def elliptic_arrangement(n: int) -> ArrangementSummary:
    """The elliptic arrangement alone on ``H``, without the ``N``-curves.

    Its 3-points are the points that become 4-points once ``N`` is added.
    """
    counts = elliptic_arrangement_counts(n)
    K = hesse.named_class("K_H")
    fams = tuple(
        CurveFamily(
            f"Eps_{i}",
            counts["curves_per_direction"],
            1,
            hesse.named_class("F_i", i).dot(hesse.named_class("F_i", i)),
            incidence={FOUR: counts["four_per_curve"], "3pts": counts["three_per_curve"]},
        )
        for i in DIRECTIONS
    )
    arr = ArrangementSummary(
        K.dot(K),
        12 - K.dot(K),
        fams,
        (SingularityClass(FOUR, 4, counts["t4"]), SingularityClass("3pts", 3, counts["t3"])),
    )
    arr.check_double_counting()
    return arr


def build_n_curves(direction: str) -> Tuple[int, ...]:
    return hesse.build_incidence().direction_classes[direction]


@lru_cache(maxsize=None)
def _curve_class(kind: str, direction: Optional[str], member: int = 0) -> hesse.DivClass:
    """Class of one curve; ``member`` picks a distinct curve where classes differ."""
    if kind in ("Eps", "Eprime"):
        return hesse.named_class("F_i", direction)
    if kind == "N":
        return hesse.named_class("e_P", build_n_curves(direction)[member])
    if kind == "L":
        return hesse.named_class("L")
    raise KeyError(kind)


@dataclass(frozen=True)
class _Fam:
    label: str
    kind: str
    direction: Optional[str]
    count: int
    genus: int
    multiplicity: int


def _family_specs(params: FamilyParams) -> List[_Fam]:
    counts = elliptic_arrangement_counts(params.n)
    a = params.a
    out = []
    for i in DIRECTIONS:
        out.append(_Fam(f"Eps_{i}", "Eps", i, counts["curves_per_direction"], 1, 3 * a[i]))
    for i in DIRECTIONS:
        if params.eprime_count:
            out.append(_Fam(f"Eprime_{i}", "Eprime", i, params.eprime_count, 1, 3 * a[i]))
    for i in DIRECTIONS:
        out.append(_Fam(f"N_{i}", "N", i, len(build_n_curves(i)), 0, 3 * a[i]))
    half = params.line_count // 2
    out.append(_Fam("L_low", "L", None, half, 0, 3))
    out.append(_Fam("L_high", "L", None, half, 0, 3 * params.high))
    return out


_ABSORBED = {"Eps", "N"}


def arrangement_on_h(params: FamilyParams) -> ArrangementSummary:
    """The branch curves on ``H`` with their special points and nodes.

    Intersections among ``Eps`` and ``N`` curves all sit at the 4-points and
    3-points (and disappear on ``Y_n``); every other intersection is a
    transverse node, counted by the intersection pairing on ``H``.
    """
    counts = elliptic_arrangement_counts(params.n)
    specs = _family_specs(params)
    families = []
    t2_twice = 0
    for X in specs:
        cx = _curve_class(X.kind, X.direction)
        meets: Dict[str, int] = {}
        absorbed = {"Eps": 0, "N": 0}
        for Y in specs:
            if Y is X:
                cy = _curve_class(Y.kind, Y.direction, member=1 if Y.count > 1 else 0)
                pts = cx.dot(cy) * (Y.count - 1)
            else:
                pts = cx.dot(_curve_class(Y.kind, Y.direction)) * Y.count
            if X.kind in _ABSORBED and Y.kind in _ABSORBED:
                absorbed[Y.kind] += pts
            elif pts:
                meets[Y.label] = pts
        incidence = {NODES: sum(meets.values())}
        if X.kind == "Eps":
            incidence[FOUR] = counts["four_per_curve"]
            incidence[THREE] = counts["three_per_curve"]
            # at a 4-point the curve meets 3 others, at a 3-point 2 others and one N-curve
            if absorbed["Eps"] != 3 * incidence[FOUR] + 2 * incidence[THREE]:
                raise InconsistencyError("Eps-Eps intersections absorbed by 3- and 4-points")
            if absorbed["N"] != incidence[THREE]:
                raise InconsistencyError("Eps-N intersections absorbed by 3-points")
        elif X.kind == "N":
            incidence[THREE] = counts["three_per_n_curve"]
            if absorbed["N"] != 0:
                raise InconsistencyError("N-curves are disjoint")
            if absorbed["Eps"] != 3 * incidence[THREE]:
                raise InconsistencyError("N-Eps intersections absorbed by 3-points")
        else:
            incidence[FOUR] = incidence[THREE] = 0
        if X.kind == "N":
            incidence[FOUR] = 0
        t2_twice += X.count * incidence[NODES]
        families.append(
            CurveFamily(X.label, X.count, X.genus, cx.dot(cx), X.multiplicity, incidence, meets)
        )
    if t2_twice % 2:
        raise InconsistencyError("node double counting")
    K = hesse.named_class("K_H")
    arr = ArrangementSummary(
        K.dot(K),
        12 - K.dot(K),
        tuple(families),
        (
            SingularityClass(FOUR, 4, counts["t4"]),
            SingularityClass(THREE, 4, counts["t3"]),
            SingularityClass(NODES, 2, t2_twice // 2),
        ),
    )
    arr.check_double_counting()
    return arr


def arrangement_on_y(params: FamilyParams) -> ArrangementSummary:
    """Blow up the 4-points, then the 3-points; the branch divisor becomes nodal."""
    z = blow_up_class(arrangement_on_h(params), FOUR, 4, adjoin_exceptional=False)
    return blow_up_class(z, THREE, 4, adjoin_exceptional=False)


# ---------------------------------------------------------------------------
# Node census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodeCensus:
    degree: int
    by_families: Dict[Tuple[str, str], int]
    by_multiplicity: Dict[Tuple[int, int], int]
    by_type: Dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.by_families.values())

    def count_of_type(self, q: int) -> int:
        return self.by_type.get(q, 0)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "total": self.total,
            "by_type": [{"q": q, "count": c} for q, c in self.by_type.items()],
            "by_multiplicity": [{"nu": list(k), "count": c} for k, c in self.by_multiplicity.items()],
            "by_families": [{"pair": list(k), "count": c} for k, c in self.by_families.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NodeCensus":
        try:
            return cls(
                int(data["degree"]),
                {tuple(e["pair"]): int(e["count"]) for e in data["by_families"]},
                {tuple(int(x) for x in e["nu"]): int(e["count"]) for e in data["by_multiplicity"]},
                {int(e["q"]): int(e["count"]) for e in data["by_type"]},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed node census: {exc}") from exc


def census_from_arrangement(arr: ArrangementSummary, degree: int) -> NodeCensus:
    fams = {f.label: f for f in arr.families}
    labels = [f.label for f in arr.families]
    by_fam: Dict[Tuple[str, str], int] = {}
    for x, y in combinations_with_replacement(labels, 2):
        X, Y = fams[x], fams[y]
        nodes = X.count * X.meets.get(y, 0)
        if x == y:
            if nodes % 2:
                raise InconsistencyError(f"odd self-node count in {x}")
            nodes //= 2
        elif nodes != Y.count * Y.meets.get(x, 0):
            raise InconsistencyError(f"asymmetric node count between {x} and {y}")
        if nodes:
            by_fam[(x, y)] = nodes
    by_mult: Dict[Tuple[int, int], int] = {}
    by_type: Dict[int, int] = {}
    for (x, y), cnt in by_fam.items():
        a, b = fams[x].multiplicity, fams[y].multiplicity
        key = tuple(sorted((a % degree, b % degree)))
        by_mult[key] = by_mult.get(key, 0) + cnt
        q = node_q(a, b, degree)
        if node_q(b, a, degree) != pow(q, -1, degree):
            raise InconsistencyError("node type under swapping branches")
        by_type[q] = by_type.get(q, 0) + cnt
    if sum(by_fam.values()) != arr.t(2):
        raise InconsistencyError("census total equals t2 of the arrangement")
    return NodeCensus(degree, by_fam, dict(sorted(by_mult.items())), dict(sorted(by_type.items(), reverse=True)))


def node_census(params: FamilyParams) -> NodeCensus:
    census = census_from_arrangement(arrangement_on_y(params), params.degree)
    _check_census(params, census)
    return census


def _check_census(params: FamilyParams, census: NodeCensus) -> Dict[str, bool]:
    expected = list(expected_node_types(params))
    q_equal, q_cross = expected
    stray = set(census.by_type) - set(expected)
    checks = {
        "census: node types as expected": not stray,
        "census: t2 polynomial": census.total == poly_t2(params),
        "census: t21 polynomial": census.count_of_type(q_equal) == poly_t21(params),
        "census: t22 polynomial": census.count_of_type(q_cross) == poly_t22(params),
    }
    for name, ok in checks.items():
        if not ok:
            raise InconsistencyError(name, f"params={params.to_dict()} census={census.by_type}")
    return checks


# ---------------------------------------------------------------------------
# Limit slopes
# ---------------------------------------------------------------------------

_LAMBDA = {
    SPIN: ((108, 132, 11), (36, 96, 8)),
    NONSPIN: ((27, 48, 8), (9, 48, 8)),
}


def _variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


def _is_infinite(x) -> bool:
    return x is None or (isinstance(x, float) and x == float("inf")) or x == "inf"


def limit_slope(variant: str, x: XValue) -> Fraction:
    """Limit of ``c1^2/c2`` as ``p`` grows, at ``x = alpha/beta``."""
    (a4, a2, a0), (b4, b2, b0) = _LAMBDA[_variant(variant)]
    if _is_infinite(x):
        return Fraction(a4, b4)
    if isinstance(x, float):
        x = Fraction(x)
    x = Fraction(x)
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    X = x * x
    return (a4 * X * X + a2 * X + a0) / (b4 * X * X + b2 * X + b0)


def slope_interval(variant: str) -> Tuple[Fraction, Fraction]:
    return limit_slope(variant, 0), limit_slope(variant, None)


@dataclass(frozen=True)
class SlopeInversion:
    variant: str
    r: Fraction
    # lambda(x) = r  <=>  A X^2 + B X + C = 0 with X = x^2
    quadratic: Tuple[Fraction, Fraction, Fraction]
    x: Optional[Decimal]  # None means infinity
    alpha: int
    beta: int
    achieved: Fraction

    @property
    def x_squared_exact(self) -> Optional[Tuple[Fraction, Fraction, Fraction]]:
        """``(u, v, w)`` with ``x^2 = (u + sqrt(v)) / w``, or None at infinity."""
        A, B, C = self.quadratic
        if self.x is None:
            return None
        if A == 0:
            return (-C / B, Fraction(0), Fraction(1))
        return (-B, B * B - 4 * A * C, 2 * A)


def invert_slope(
    variant: str,
    r,
    eps=Fraction(1, 10**6),
    max_denominator: int = 10**9,
    digits: int = 50,
) -> SlopeInversion:
    """Solve ``lambda(x) = r`` and pick ``alpha/beta`` with ``|lambda(alpha/beta) - r| < eps``."""
    variant = _variant(variant)
    r, eps = Fraction(r), Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    lo, hi = slope_interval(variant)
    if not lo <= r <= hi:
        raise DomainError(f"r={r} lies outside the image [{lo}, {hi}] of the {variant} limit slope")
    (a4, a2, a0), (b4, b2, b0) = _LAMBDA[variant]
    A, B, C = a4 - b4 * r, a2 - b2 * r, a0 - b0 * r
    if r == hi:
        return SlopeInversion(variant, r, (A, B, C), None, 1, 0, hi)

    with localcontext() as ctx:
        ctx.prec = digits + 10
        if A == 0:
            X = Decimal(-C.numerator * B.denominator) / Decimal(C.denominator * B.numerator)
        else:
            disc = B * B - 4 * A * C
            sq = (Decimal(disc.numerator) / Decimal(disc.denominator)).sqrt()
            X = (Decimal(-B.numerator) / Decimal(B.denominator) + sq) / (Decimal(2 * A.numerator) / Decimal(A.denominator))
        if X < 0:
            X = Decimal(0)
        x = X.sqrt()
        ctx.prec = digits
        x = +x

    target = Fraction(x)
    bound = 1
    while bound <= max_denominator:
        cand = target.limit_denominator(bound)
        if cand.numerator == 0:
            cand = Fraction(1, bound)
        lam = limit_slope(variant, cand)
        if abs(lam - r) < eps:
            return SlopeInversion(variant, r, (A, B, C), x, cand.numerator, cand.denominator, lam)
        bound *= 2
    raise SearchExhausted(f"no alpha/beta with beta <= {max_denominator} within {eps} of r={r}")


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class FamilyReport:
    params: FamilyParams
    census: NodeCensus
    branch: BranchSummary
    invariants: SurfaceInvariants
    limit_slope: Fraction
    checks: Dict[str, bool] = field(default_factory=dict)
    strict_selfint: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def slope(self) -> Fraction:
        return self.invariants.slope

    @property
    def slope_gap(self) -> Fraction:
        return abs(self.slope - self.limit_slope)

    @property
    def line_multiplicities(self) -> List[int]:
        return [3 * b for b in self.params.b]

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "n": self.n,
            "degree": self.params.degree,
            "multiplicities": {
                "directions": {i: 3 * a for i, a in self.params.a.items()},
                "lines": _run_length(self.line_multiplicities),
            },
            "census": self.census.to_dict(),
            "branch": self.branch.to_dict(),
            "invariants": self.invariants.to_dict(),
            "limit_slope": dump_num(self.limit_slope),
            "slope_gap": dump_num(self.slope_gap),
            "strict_selfint": {k: dump_num(v) for k, v in self.strict_selfint.items()},
            "checks": dict(self.checks),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FamilyReport":
        """Inverse of :meth:`to_dict`; derived fields are recomputed, not read."""
        try:
            return cls(
                params=FamilyParams.from_dict(data["params"]),
                census=NodeCensus.from_dict(data["census"]),
                branch=BranchSummary.from_dict(data["branch"]),
                invariants=SurfaceInvariants.from_dict(data["invariants"]),
                limit_slope=load_num(data["limit_slope"]),
                checks={str(k): bool(v) for k, v in data.get("checks", {}).items()},
                strict_selfint={str(k): load_num(v) for k, v in data.get("strict_selfint", {}).items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed family report: {exc}") from exc


def _run_length(values: List[int]) -> List[dict]:
    """Line multiplicities as index ranges, e.g. lines 1..4d have 3."""
    out: List[dict] = []
    for idx, v in enumerate(values, start=1):
        if out and out[-1]["multiplicity"] == v:
            out[-1]["last"] = idx
        else:
            out.append({"first": idx, "last": idx, "multiplicity": v})
    return out


def _x_of(params: FamilyParams) -> Optional[Fraction]:
    return None if params.beta == 0 else Fraction(params.alpha, params.beta)


def build_family(params: FamilyParams) -> FamilyReport:
    """Run the whole pipeline for one tuple; any failed identity raises."""
    m = params.degree
    checks: Dict[str, bool] = {}

    y = arrangement_on_y(params)
    census = census_from_arrangement(y, m)
    checks.update(_check_census(params, census))

    # arithmetic kernel at the two node types
    for q, (c_val, l_val) in expected_node_types(params).items():
        checks[f"kernel: c({q},{m})"] = c_coeff(q, m) == c_val
        checks[f"kernel: l({q},{m})"] = hj_length(q, m) == l_val

    log_c1, log_c2 = log_chern_numbers(y)
    closed_c1, closed_c2 = closed_log_chern(params)
    checks["log c1bar^2 closed form"] = log_c1 == closed_c1
    checks["log c2bar closed form"] = log_c2 == closed_c2

    # sum A_j^2 assembled from the families vs recovered from the closed form
    recovered = y.ambient_c1sq + 2 * y.t(2) + 4 * y.sum_genus_minus_one - closed_c1
    lines = params.line_count
    checks["sum A_j^2 from families = inverted closed form"] = y.sum_self_intersection == recovered
    checks["sum A_j^2 = -(4/3) n^4 + #lines"] = y.sum_self_intersection == Fraction(-4 * params.n ** 4, 3) + lines
    checks["sum (g_j - 1) = -12 - #lines"] = y.sum_genus_minus_one == -12 - lines

    branch = BranchSummary(
        degree=m,
        log_c1sq=log_c1,
        log_c2=log_c2,
        sum_selfint=Fraction(y.sum_self_intersection),
        sum_genus_minus_one=y.sum_genus_minus_one,
        node_census=census.by_multiplicity,
        curve_data=y.families,
    )
    checks["branch t2 = census total"] = branch.t2 == census.total
    types = {row["q"] for row in node_type_table(branch).values()}
    checks["node types from branch summary"] = types <= set(expected_node_types(params))

    inv = chern_of_cover(branch, spin=params.spin)

    for name, ok in hesse.lattice_report(params).items():
        checks[f"lattice: {name}"] = ok
    for name, ok in necessary_condition_report(inv).items():
        checks[f"necessary: {name}"] = ok

    strict: Dict[str, Fraction] = {}
    if not params.spin:
        for fam in y.families:
            if fam.genus == 0 and fam.count:
                strict[fam.label] = strict_transform_selfint(branch, fam.label)
                checks[f"minimality: {fam.label} strict self-intersection < -1"] = strict[fam.label] < -1

    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise InconsistencyError(failed[0], f"params={params.to_dict()}; all failures: {failed}")

    return FamilyReport(params, census, branch, inv, limit_slope(params.variant, _x_of(params)), checks, strict)


# ---------------------------------------------------------------------------
# Target search and base change
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TargetResult:
    params: FamilyParams
    slope: Fraction
    gap: Fraction
    inversion: SlopeInversion
    primes_tried: Tuple[int, ...]
    report: FamilyReport = field(repr=False, compare=False, default=None)


def prime_ceiling_from_env(default: int = DEFAULT_PRIME_CEILING) -> int:
    raw = os.environ.get("GEOLAB_PRIME_CEILING")
    if raw is None:
        return default
    try:
        val = int(raw)
    except ValueError as exc:
        raise DomainError(f"GEOLAB_PRIME_CEILING must be an integer, got {raw!r}") from exc
    if val < 5:
        raise DomainError("GEOLAB_PRIME_CEILING must be >= 5")
    return val


def target_slope(
    variant: str,
    r,
    eps,
    d: Optional[int] = None,
    prime_ceiling: Optional[int] = None,
    max_denominator: int = 10**9,
    growth: Fraction = Fraction(5, 4),
) -> TargetResult:
    """Find ``(alpha, beta, d, p)`` whose computed slope is within ``eps`` of ``r``.

    ``alpha/beta`` is fixed first so that the limit slope is within ``eps/2``
    of ``r``; then ``p`` runs over primes, growing geometrically, until the
    verified slope itself is within ``eps``.
    """
    variant = _variant(variant)
    r, eps = Fraction(r), Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    if d is None:
        d = 1 if variant == SPIN else 2
    ceiling = prime_ceiling_from_env() if prime_ceiling is None else prime_ceiling
    inv = invert_slope(variant, r, eps / 2, max_denominator=max_denominator)

    p = next_prime(max(5, 2 * d) if variant == NONSPIN else 5)
    tried = []
    while p <= ceiling:
        tried.append(p)
        report = build_family(FamilyParams(variant, inv.alpha, inv.beta, d, p))
        gap = abs(report.slope - r)
        if gap < eps:
            return TargetResult(report.params, report.slope, gap, inv, tuple(tried), report)
        p = next_prime(max(p + 1, int(p * growth)))
    raise SearchExhausted(
        f"no prime p <= {ceiling} brings the slope within {eps} of {r} (alpha={inv.alpha}, beta={inv.beta})"
    )


def fiber_genus(params: FamilyParams) -> int:
    """Genus of the fibre of the pencil of lines through a point of ``L_1``."""
    n, p = params.n, params.p
    two_g_minus_2 = -2 * p + (p - 1) * (4 * (n * n - 3) + 12 * params.beta ** 2 * p ** 2 + 2 * params.d)
    if two_g_minus_2 % 2:
        raise InconsistencyError("2g - 2 is even")
    return two_g_minus_2 // 2 + 1


def genus_base_change(report: FamilyReport, q: int) -> SurfaceInvariants:
    """Invariants after base change along a ``(q+1)``-cyclic cover of the line."""
    if report.params.spin:
        raise DomainError("base change is defined for the non-spin family only")
    if not isinstance(q, int) or q < 1:
        raise DomainError(f"q must be a positive integer, got {q!r}")
    g = fiber_genus(report.params)
    p = report.params.p
    c1 = (q + 1) * (report.invariants.c1sq - p) + 16 * q * (g - 1)
    c2 = (q + 1) * (report.invariants.c2 + p) + 8 * q * (g - 1)
    return SurfaceInvariants(c1, c2, spin=False, pi1=surface_group(q))
