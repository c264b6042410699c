"""Chern invariants of cyclic root covers branched along a nodal divisor.

For an ``m``-th root cover ``X -> Y`` branched along ``A = sum A_j`` with
multiplicities ``nu_j`` coprime to ``m``::

    c1^2(X) = m c1bar^2 - 2(t2 + 2 sum(g_j - 1)) + (1/m) sum A_j^2 - sum_nodes c(q, m)
    c2(X)   = m c2bar   -  (t2 + 2 sum(g_j - 1))                   + sum_nodes l(q, m)

where ``(c1bar^2, c2bar)`` are the log Chern numbers of ``(Y, A)`` and the
node over ``A_i . A_j`` has type ``1/m (1, q)`` with ``nu_i + q nu_j = 0``.

JSON schemas::

    BranchSummary     {"degree": int, "log_c1sq": num, "log_c2": num,
                       "sum_selfint": num, "sum_genus_minus_one": int,
                       "census": [{"nu": [int, int], "count": int}],
                       "curve_data": [CurveFamily, ...]}
    SurfaceInvariants {"c1sq": int, "c2": int, "chi": num, "signature": num,
                       "slope": num, "spin": bool, "pi1": str}

A ``num`` is a JSON integer or an exact rational string ``"a/b"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Optional, Tuple

from .errors import DomainError, InconsistencyError
from .logchern import CurveFamily
from .numtheory import c_coeff, hj_length, node_q

__all__ = [
    "BranchSummary",
    "SurfaceInvariants",
    "chern_of_cover",
    "strict_transform_selfint",
    "necessary_condition_report",
    "node_type_table",
    "dump_num",
    "load_num",
    "TRIVIAL",
    "surface_group",
]

TRIVIAL = "trivial"


def surface_group(q: int) -> str:
    return f"surface-group(genus={q})"


def dump_num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def load_num(v) -> Fraction:
    if isinstance(v, bool):
        raise DomainError("expected a number, got a boolean")
    if isinstance(v, float):
        raise DomainError("floats are not accepted; use an integer or an 'a/b' string")
    try:
        return Fraction(v)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"not an exact number: {v!r}") from exc


def _pair_key(a: int, b: int, m: int) -> Tuple[int, int]:
    return tuple(sorted((a % m, b % m)))


@dataclass(frozen=True)
class BranchSummary:
    degree: int
    log_c1sq: Fraction
    log_c2: Fraction
    sum_selfint: Fraction
    sum_genus_minus_one: int
    node_census: Dict[Tuple[int, int], int]
    curve_data: Tuple[CurveFamily, ...] = field(default=())

    def __post_init__(self):
        if self.degree < 2:
            raise DomainError(f"cover degree must be >= 2, got {self.degree}")
        census: Dict[Tuple[int, int], int] = {}
        for (a, b), cnt in self.node_census.items():
            if cnt < 0:
                raise DomainError("negative node count")
            key = _pair_key(a, b, self.degree)
            for nu in key:
                if gcd(nu, self.degree) != 1:
                    raise DomainError(f"multiplicity {nu} is not coprime to the degree {self.degree}")
            census[key] = census.get(key, 0) + cnt
        object.__setattr__(self, "node_census", dict(sorted(census.items())))
        object.__setattr__(self, "curve_data", tuple(self.curve_data))
        for name in ("log_c1sq", "log_c2", "sum_selfint"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def t2(self) -> int:
        return sum(self.node_census.values())

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "log_c1sq": dump_num(self.log_c1sq),
            "log_c2": dump_num(self.log_c2),
            "sum_selfint": dump_num(self.sum_selfint),
            "sum_genus_minus_one": self.sum_genus_minus_one,
            "census": [{"nu": list(k), "count": v} for k, v in self.node_census.items()],
            "curve_data": [f.to_dict() for f in self.curve_data],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BranchSummary":
        try:
            return cls(
                degree=int(data["degree"]),
                log_c1sq=load_num(data["log_c1sq"]),
                log_c2=load_num(data["log_c2"]),
                sum_selfint=load_num(data["sum_selfint"]),
                sum_genus_minus_one=int(data["sum_genus_minus_one"]),
                node_census={tuple(int(x) for x in e["nu"]): int(e["count"]) for e in data.get("census", [])},
                curve_data=tuple(CurveFamily.from_dict(f) for f in data.get("curve_data", [])),
            )
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed branch summary: {exc}") from exc


@dataclass(frozen=True)
class SurfaceInvariants:
    c1sq: int
    c2: int
    spin: bool = False
    pi1: str = TRIVIAL

    @property
    def chi(self) -> Fraction:
        return Fraction(self.c1sq + self.c2, 12)

    @property
    def signature(self) -> Fraction:
        return Fraction(self.c1sq - 2 * self.c2, 3)

    @property
    def slope(self) -> Fraction:
        if self.c2 == 0:
            raise ZeroDivisionError("slope undefined for c2 = 0")
        return Fraction(self.c1sq, self.c2)

    def to_dict(self) -> dict:
        return {
            "c1sq": self.c1sq,
            "c2": self.c2,
            "chi": dump_num(self.chi),
            "signature": dump_num(self.signature),
            "slope": dump_num(self.slope) if self.c2 else None,
            "spin": self.spin,
            "pi1": self.pi1,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SurfaceInvariants":
        try:
            return cls(int(data["c1sq"]), int(data["c2"]), bool(data.get("spin", False)), str(data.get("pi1", TRIVIAL)))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed surface invariants: {exc}") from exc


def node_type_table(branch: BranchSummary) -> Dict[Tuple[int, int], dict]:
    """For each census key: the singularity type ``q`` and its ``c``, ``l`` values."""
    m = branch.degree
    out = {}
    for (a, b), cnt in branch.node_census.items():
        q = node_q(a, b, m)
        out[(a, b)] = {"q": q, "count": cnt, "c": c_coeff(q, m), "l": hj_length(q, m)}
    return out


def chern_of_cover(branch: BranchSummary, spin: bool = False, pi1: str = TRIVIAL) -> SurfaceInvariants:
    m = branch.degree
    table = node_type_table(branch)
    c_defect = sum((row["c"] * row["count"] for row in table.values()), Fraction(0))
    l_defect = sum(row["l"] * row["count"] for row in table.values())
    nodes_and_genus = branch.t2 + 2 * branch.sum_genus_minus_one
    c1 = m * branch.log_c1sq - 2 * nodes_and_genus + branch.sum_selfint / m - c_defect
    c2 = m * branch.log_c2 - nodes_and_genus + l_defect
    if c1.denominator != 1 or c2.denominator != 1:
        raise InconsistencyError("integrality of c1^2 and c2", f"got c1^2={c1}, c2={c2}")
    return SurfaceInvariants(int(c1), int(c2), spin, pi1)


def strict_transform_selfint(branch: BranchSummary, family_label: str) -> Fraction:
    """``(1/m)(A_j^2 - sum_{i != j} q_{i,j} A_i . A_j)`` for one curve of a family."""
    fams = {f.label: f for f in branch.curve_data}
    if family_label not in fams:
        raise DomainError(f"no curve data for family {family_label!r}")
    fam = fams[family_label]
    if fam.multiplicity is None:
        raise DomainError(f"family {family_label!r} has no multiplicity")
    m = branch.degree
    total = Fraction(fam.self_intersection)
    for other, pts in fam.meets.items():
        if other not in fams or fams[other].multiplicity is None:
            raise DomainError(f"missing intersection data for partner {other!r}")
        total -= node_q(fams[other].multiplicity, fam.multiplicity, m) * pts
    return total / m


def necessary_condition_report(inv: SurfaceInvariants) -> Dict[str, bool]:
    c1, c2 = inv.c1sq, inv.c2
    out = {
        "c1^2 > 0": c1 > 0,
        "c2 > 0": c2 > 0,
        "BMY: c1^2 <= 3 c2": c1 <= 3 * c2,
        "Noether: 5 c1^2 >= c2 - 36": 5 * c1 >= c2 - 36,
        "Noether integrality: c1^2 + c2 = 0 (mod 12)": (c1 + c2) % 12 == 0,
        "signature integral": (c1 - 2 * c2) % 3 == 0,
    }
    if inv.spin:
        sig = inv.signature
        out["Rokhlin: signature = 0 (mod 16)"] = sig.denominator == 1 and sig.numerator % 16 == 0
    return out
