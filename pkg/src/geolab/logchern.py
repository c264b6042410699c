"""Log Chern numbers of simple-crossing curve arrangements.

Arrangements are stored as orbit-symmetric summaries: every curve of a
:class:`CurveFamily` has the same genus, self-intersection and incidences,
so a summary never enumerates points. Singularities are grouped into
labelled classes of ``k``-points so that blow-ups can target one class at a
time.

JSON schema (``ArrangementSummary.to_dict``)::

    {
      "ambient": {"c1sq": int, "c2": int},
      "families": [
        {"label": str, "count": int, "genus": int,
         "self_intersection": int, "multiplicity": int | null,
         "incidence": {class_label: points per curve},
         "meets": {family_label: transverse nodes per curve}}
      ],
      "singularities": [{"label": str, "k": int, "count": int}]
    }
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import DomainError, InconsistencyError

__all__ = [
    "CurveFamily",
    "SingularityClass",
    "ArrangementSummary",
    "log_chern_numbers",
    "blow_up_class",
    "blow_up_all",
]


@dataclass(frozen=True)
class CurveFamily:
    label: str
    count: int
    genus: int
    self_intersection: int
    multiplicity: Optional[int] = None
    incidence: Dict[str, int] = field(default_factory=dict)
    # nodes with other families (or with itself); read by the node census
    meets: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.count < 0 or self.genus < 0:
            raise DomainError(f"family {self.label!r}: count and genus must be >= 0")
        if self.multiplicity is not None and self.multiplicity < 1:
            raise DomainError(f"family {self.label!r}: multiplicity must be positive")
        if any(v < 0 for v in self.incidence.values()):
            raise DomainError(f"family {self.label!r}: negative incidence")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "count": self.count,
            "genus": self.genus,
            "self_intersection": self.self_intersection,
            "multiplicity": self.multiplicity,
            "incidence": dict(self.incidence),
            "meets": dict(self.meets),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CurveFamily":
        return cls(
            label=str(data["label"]),
            count=int(data["count"]),
            genus=int(data["genus"]),
            self_intersection=int(data["self_intersection"]),
            multiplicity=None if data.get("multiplicity") is None else int(data["multiplicity"]),
            incidence={str(k): int(v) for k, v in data.get("incidence", {}).items()},
            meets={str(k): int(v) for k, v in data.get("meets", {}).items()},
        )


@dataclass(frozen=True)
class SingularityClass:
    label: str
    k: int
    count: int

    def __post_init__(self):
        if self.k < 2 or self.count < 0:
            raise DomainError(f"class {self.label!r}: need k >= 2 and count >= 0")


@dataclass(frozen=True)
class ArrangementSummary:
    ambient_c1sq: int
    ambient_c2: int
    families: Tuple[CurveFamily, ...] = ()
    singularities: Tuple[SingularityClass, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "singularities", tuple(self.singularities))
        if (self.ambient_c1sq + self.ambient_c2) % 12:
            raise DomainError(
                f"ambient pair ({self.ambient_c1sq}, {self.ambient_c2}) violates Noether integrality"
            )
        labels = [s.label for s in self.singularities]
        if len(set(labels)) != len(labels):
            raise DomainError("duplicate singularity class labels")

    def t(self, k: int) -> int:
        """Number of ``k``-points over all classes."""
        return sum(s.count for s in self.singularities if s.k == k)

    def singularity(self, label: str) -> SingularityClass:
        for s in self.singularities:
            if s.label == label:
                return s
        raise DomainError(f"no singularity class {label!r}")

    def family(self, label: str) -> CurveFamily:
        for f in self.families:
            if f.label == label:
                return f
        raise DomainError(f"no curve family {label!r}")

    def double_counting_defects(self) -> Dict[str, int]:
        """``sum(count * incidence) - k * t`` per class; empty when consistent."""
        out = {}
        for s in self.singularities:
            lhs = sum(f.count * f.incidence.get(s.label, 0) for f in self.families)
            if lhs != s.k * s.count:
                out[s.label] = lhs - s.k * s.count
        return out

    def check_double_counting(self) -> None:
        bad = self.double_counting_defects()
        if bad:
            raise InconsistencyError("double counting of k-points", repr(bad))

    @property
    def sum_self_intersection(self) -> int:
        return sum(f.count * f.self_intersection for f in self.families)

    @property
    def sum_genus_minus_one(self) -> int:
        return sum(f.count * (f.genus - 1) for f in self.families)

    def to_dict(self) -> dict:
        return {
            "ambient": {"c1sq": self.ambient_c1sq, "c2": self.ambient_c2},
            "families": [f.to_dict() for f in self.families],
            "singularities": [
                {"label": s.label, "k": s.k, "count": s.count} for s in self.singularities
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ArrangementSummary":
        try:
            amb = data["ambient"]
            return cls(
                ambient_c1sq=int(amb["c1sq"]),
                ambient_c2=int(amb["c2"]),
                families=tuple(CurveFamily.from_dict(f) for f in data.get("families", [])),
                singularities=tuple(
                    SingularityClass(str(s["label"]), int(s["k"]), int(s["count"]))
                    for s in data.get("singularities", [])
                ),
            )
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed arrangement summary: {exc}") from exc


def log_chern_numbers(arr: ArrangementSummary) -> Tuple[Fraction, Fraction]:
    """``(c1bar^2, c2bar)`` of a simple-crossing arrangement.

    c1bar^2 = c1^2 - sum C_i^2 + sum_k (3k - 4) t_k + 4 sum (g_i - 1)
    c2bar   = c2 + sum_k (k - 1) t_k + 2 sum (g_i - 1)
    """
    sum_g = arr.sum_genus_minus_one
    c1 = (
        arr.ambient_c1sq
        - arr.sum_self_intersection
        + sum((3 * s.k - 4) * s.count for s in arr.singularities)
        + 4 * sum_g
    )
    c2 = arr.ambient_c2 + sum((s.k - 1) * s.count for s in arr.singularities) + 2 * sum_g
    return Fraction(c1), Fraction(c2)


def blow_up_class(
    arr: ArrangementSummary, class_label: str, k: int, adjoin_exceptional: bool = False
) -> ArrangementSummary:
    """Blow up every point of one singularity class.

    Each curve loses one unit of self-intersection per point of the class it
    passes through. With ``adjoin_exceptional`` the exceptional curves join
    the arrangement as a rational ``(-1)``-family, and each of them meets the
    ``k`` strict transforms at new nodes, recorded in a class
    ``"<class_label>/exc"``.
    """
    sing = arr.singularity(class_label)
    if sing.k != k:
        raise DomainError(f"class {class_label!r} holds {sing.k}-points, not {k}-points")
    if k < 2:
        raise DomainError("k must be >= 2")
    for f in arr.families:
        if f.count and class_label not in f.incidence:
            raise DomainError(f"family {f.label!r} has no incidence data for {class_label!r}")

    t = sing.count
    if t == 0:
        return arr
    node_label = f"{class_label}/exc"
    families: List[CurveFamily] = []
    for f in arr.families:
        hits = f.incidence.get(class_label, 0)
        inc = {lab: v for lab, v in f.incidence.items() if lab != class_label}
        if adjoin_exceptional and hits:
            inc[node_label] = inc.get(node_label, 0) + hits
        families.append(replace(f, self_intersection=f.self_intersection - hits, incidence=inc))
    classes = [s for s in arr.singularities if s.label != class_label]
    if adjoin_exceptional:
        families.append(
            CurveFamily(
                label=f"{class_label}/exceptional",
                count=t,
                genus=0,
                self_intersection=-1,
                # an exceptional curve passes through no other special point
                incidence={**{c.label: 0 for c in classes}, node_label: k},
            )
        )
        classes.append(SingularityClass(node_label, 2, k * t))
    out = ArrangementSummary(arr.ambient_c1sq - t, arr.ambient_c2 + t, tuple(families), tuple(classes))
    if not arr.double_counting_defects():
        out.check_double_counting()
    return out


def blow_up_all(arr: ArrangementSummary, adjoin_exceptional: bool = True) -> ArrangementSummary:
    """Blow up every class of ``k``-points with ``k > 2``, in table order."""
    out = arr
    for s in arr.singularities:
        if s.k > 2:
            out = blow_up_class(out, s.label, s.k, adjoin_exceptional)
    return out
