"""Picard lattice of the blown-up dual Hesse plane and its identity checks.

``H`` is the blow-up of the projective plane at the twelve triple points of
the dual Hesse arrangement. Its nine lines and twelve points are realized
combinatorially: lines are the points of the affine plane over ``Z/3`` and
points are its twelve lines, grouped into four parallel classes (the
direction classes ``0, 1, zeta, inf``).

Classes live in one integer lattice with ordered basis::

    L, e_0 .. e_11, E, G_0, G_1, G_zeta, G_inf

``L`` is the pulled-back line class, ``e_P`` the exceptional curves over the
twelve points, ``E`` the sum of the exceptional curves over the 4-points of
the elliptic arrangement, and ``G_i`` the sum of the exceptional curves over
the 3-points lying on ``N_i``. Coordinates are total-transform coordinates,
so classes pulled back from ``H`` have zero ``E`` and ``G`` entries.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DomainError
from .params import DIRECTIONS, FamilyParams

__all__ = [
    "DualHesseIncidence",
    "DivClass",
    "build_incidence",
    "named_class",
    "zero_class",
    "check_equivalence",
    "root_divisibility_report",
    "check_root_divisibility",
    "spin_parity_report",
    "check_spin_parity",
    "symbolic_parity",
    "hesse_identities",
    "lattice_report",
    "RANK",
]

N_LINES = 9
N_POINTS = 12
IDX_L = 0
IDX_E = 13
IDX_G = {d: 14 + k for k, d in enumerate(DIRECTIONS)}
RANK = 18


@dataclass(frozen=True)
class DualHesseIncidence:
    incidence: Tuple[Tuple[int, ...], ...]
    direction_classes: Dict[str, Tuple[int, ...]]
    fiber_partition: Dict[str, Tuple[Tuple[int, ...], ...]]

    def points_on(self, line: int) -> List[int]:
        return [P for P in range(N_POINTS) if self.incidence[line][P]]

    def lines_through(self, point: int) -> List[int]:
        return [ell for ell in range(N_LINES) if self.incidence[ell][point]]

    def direction_of(self, point: int) -> str:
        for i, pts in self.direction_classes.items():
            if point in pts:
                return i
        raise KeyError(point)


@lru_cache(maxsize=None)
def build_incidence() -> DualHesseIncidence:
    affine_points = [(x, y) for x in range(3) for y in range(3)]
    # parallel classes of AG(2,3): membership test per offset c
    families = {
        "0": lambda x, y, c: y == c,
        "1": lambda x, y, c: (y - x) % 3 == c,
        "zeta": lambda x, y, c: (y - 2 * x) % 3 == c,
        "inf": lambda x, y, c: x == c,
    }
    incidence = [[0] * N_POINTS for _ in range(N_LINES)]
    classes: Dict[str, Tuple[int, ...]] = {}
    for k, i in enumerate(DIRECTIONS):
        pts = []
        for c in range(3):
            P = 3 * k + c
            pts.append(P)
            for ell, (x, y) in enumerate(affine_points):
                if families[i](x, y, c):
                    incidence[ell][P] = 1
        classes[i] = tuple(pts)
    inc = tuple(tuple(row) for row in incidence)
    fibers = {
        i: tuple(tuple(ell for ell in range(N_LINES) if inc[ell][P]) for P in classes[i])
        for i in DIRECTIONS
    }
    return DualHesseIncidence(inc, classes, fibers)


# ---------------------------------------------------------------------------
# Divisor classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivClass:
    coefficients: Tuple[int, ...]
    n: Optional[int] = None

    def __post_init__(self):
        if len(self.coefficients) != RANK:
            raise DomainError(f"divisor class needs {RANK} coefficients")

    def _ctx(self, other: "DivClass") -> Optional[int]:
        if self.n is not None and other.n is not None and self.n != other.n:
            raise DomainError(f"context mismatch: n={self.n} vs n={other.n}")
        return self.n if self.n is not None else other.n

    def __add__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)), self._ctx(other))

    def __sub__(self, other: "DivClass") -> "DivClass":
        return self + (-1) * other

    def __rmul__(self, k: int) -> "DivClass":
        if int(k) != k:
            raise DomainError(f"non-integral multiple {k}")
        return DivClass(tuple(int(k) * a for a in self.coefficients), self.n)

    def __neg__(self) -> "DivClass":
        return (-1) * self

    def dot(self, other: "DivClass") -> int:
        """Intersection number. Exceptional aggregates need the context ``n``."""
        n = self._ctx(other)
        a, b = self.coefficients, other.coefficients
        total = a[IDX_L] * b[IDX_L] - sum(a[k] * b[k] for k in range(1, 13))
        e_part = a[IDX_E] * b[IDX_E]
        g_part = sum(a[k] * b[k] for k in IDX_G.values())
        if e_part or g_part:
            if n is None:
                raise DomainError("pairing exceptional aggregates needs the context n")
            t4 = (n * n - 3) * (n * n - 9) // 3
            total -= e_part * t4 + g_part * (n * n - 3)
        return total

    def is_even(self) -> bool:
        return all(c % 2 == 0 for c in self.coefficients)

    def with_context(self, n: Optional[int]) -> "DivClass":
        return DivClass(self.coefficients, n)

    def describe(self) -> str:
        names = ["L"] + [f"e{P}" for P in range(N_POINTS)] + ["E"] + [f"G_{i}" for i in DIRECTIONS]
        terms = [f"{c}{nm}" for c, nm in zip(self.coefficients, names) if c]
        return " + ".join(terms) if terms else "0"


def zero_class(n: Optional[int] = None) -> DivClass:
    return DivClass((0,) * RANK, n)


def _unit(idx: int, n: Optional[int] = None) -> DivClass:
    v = [0] * RANK
    v[idx] = 1
    return DivClass(tuple(v), n)


def _direction(index) -> str:
    if index not in DIRECTIONS:
        raise DomainError(f"direction must be one of {DIRECTIONS}, got {index!r}")
    return index


def named_class(name: str, index=None, n: Optional[int] = None, count: Optional[int] = None) -> DivClass:
    """Look up a named class.

    ``L``, ``M`` (the nine line transforms), ``N`` (all twelve ``e_P``),
    ``N_i``, ``F_i``, ``K_H``, ``e_P`` (``index`` = point), ``line``
    (``index`` = line), ``E``, ``G``, ``G_i``; ``Eps_i`` is the elliptic
    arrangement in direction ``i`` (needs ``n``), ``Eprime_i`` is ``count``
    general fibres of direction ``i``.
    """
    inc = build_incidence()
    if name == "L":
        return _unit(IDX_L, n)
    if name == "e_P":
        if index not in range(N_POINTS):
            raise DomainError(f"point index must be in 0..11, got {index!r}")
        return _unit(1 + index, n)
    if name == "line":
        if index not in range(N_LINES):
            raise DomainError(f"line index must be in 0..8, got {index!r}")
        out = _unit(IDX_L, n)
        for P in inc.points_on(index):
            out = out - _unit(1 + P)
        return out
    if name == "M":
        out = zero_class(n)
        for ell in range(N_LINES):
            out = out + named_class("line", ell)
        return out
    if name == "N":
        out = zero_class(n)
        for P in range(N_POINTS):
            out = out + _unit(1 + P)
        return out
    if name == "N_i":
        out = zero_class(n)
        for P in inc.direction_classes[_direction(index)]:
            out = out + _unit(1 + P)
        return out
    if name == "F_i":
        i = _direction(index)
        out = 3 * _unit(IDX_L, n)
        for P in range(N_POINTS):
            if P not in inc.direction_classes[i]:
                out = out - _unit(1 + P)
        return out
    if name == "K_H":
        return -3 * _unit(IDX_L, n) + named_class("N")
    if name == "E":
        return _unit(IDX_E, n)
    if name == "G_i":
        return _unit(IDX_G[_direction(index)], n)
    if name == "G":
        out = zero_class(n)
        for i in DIRECTIONS:
            out = out + _unit(IDX_G[i])
        return out
    if name == "Eps_i":
        if n is None:
            raise DomainError("Eps_i needs the context n")
        if (n * n - 3) % 3:
            raise DomainError(f"n={n} must be divisible by 3")
        return ((n * n - 3) // 3) * named_class("F_i", index, n)
    if name == "Eprime_i":
        if count is None:
            raise DomainError("Eprime_i needs the fibre count")
        return count * named_class("F_i", index, n)
    raise DomainError(f"unknown class name {name!r}")


def check_equivalence(lhs: DivClass, rhs: DivClass) -> bool:
    lhs._ctx(rhs)
    return lhs.coefficients == rhs.coefficients


# ---------------------------------------------------------------------------
# Identities on H
# ---------------------------------------------------------------------------


def hesse_identities() -> Dict[str, bool]:
    inc = build_incidence()
    L, M, N, K = (named_class(x) for x in ("L", "M", "N", "K_H"))
    F = {i: named_class("F_i", i) for i in DIRECTIONS}
    out = {
        "rows contain 4 points": all(sum(r) == 4 for r in inc.incidence),
        "points lie on 3 lines": all(sum(r[P] for r in inc.incidence) == 3 for P in range(N_POINTS)),
        "two lines share one point": all(
            sum(a * b for a, b in zip(inc.incidence[x], inc.incidence[y])) == 1
            for x, y in combinations(range(N_LINES), 2)
        ),
        "M + 3N ~ 9L": check_equivalence(M + 3 * N, 9 * L),
        "F_i^2 = 0": all(F[i].dot(F[i]) == 0 for i in DIRECTIONS),
        "F_i.F_j = 3": all(F[i].dot(F[j]) == 3 for i, j in combinations(DIRECTIONS, 2)),
        "K_H^2 = -3": K.dot(K) == -3,
        "K_H^2 + e(H) = 12": K.dot(K) + 15 == 12,
        "K_H.F_i = 0": all(K.dot(F[i]) == 0 for i in DIRECTIONS),
    }
    for i in DIRECTIONS:
        fibres = zero_class()
        for triple in inc.fiber_partition[i]:
            # one singular fibre: three line transforms plus 3 N_{i,j}
            P = next(P for P in inc.direction_classes[i] if all(inc.incidence[ell][P] for ell in triple))
            fib = 3 * named_class("e_P", P)
            for ell in triple:
                fib = fib + named_class("line", ell)
            out.setdefault("F_{i,j} ~ F_i", True)
            out["F_{i,j} ~ F_i"] &= check_equivalence(fib, F[i])
            fibres = fibres + fib
        out.setdefault("F_i1 + F_i2 + F_i3 = M + 3N_i", True)
        out["F_i1 + F_i2 + F_i3 = M + 3N_i"] &= check_equivalence(fibres, M + 3 * named_class("N_i", i))
        third = M + 3 * named_class("N_i", i)
        out.setdefault("(M + 3N_i)/3 integral", True)
        out["(M + 3N_i)/3 integral"] &= all(c % 3 == 0 for c in third.coefficients)
    return out


# ---------------------------------------------------------------------------
# Root divisibility of the branch divisor
# ---------------------------------------------------------------------------


def _branch_classes(params: FamilyParams, a: Dict[str, int], b: Sequence[int]):
    n = params.n
    L, M = named_class("L", n=n), named_class("M", n=n)
    E = named_class("E", n=n)
    G = {i: named_class("G_i", i, n=n) for i in DIRECTIONS}
    eps = {i: named_class("Eps_i", i, n=n) for i in DIRECTIONS}
    epr = {i: named_class("Eprime_i", i, n=n, count=params.eprime_count) for i in DIRECTIONS}
    Ni = {i: named_class("N_i", i, n=n) for i in DIRECTIONS}
    lines = sum(b) * L

    # on H
    on_h = 3 * lines
    for i in DIRECTIONS:
        on_h = on_h + (3 * a[i]) * (eps[i] + epr[i]) + a[i] * (M + 3 * Ni[i])

    # on Z_n: every 4-point carries exactly one curve of each direction
    on_z = 3 * lines
    for i in DIRECTIONS:
        on_z = on_z + (3 * a[i]) * (eps[i] - E + epr[i]) + a[i] * (M + 3 * Ni[i])

    # on Y_n: a 3-point on N_j carries one curve of each direction i != j
    on_y = 3 * lines
    for i in DIRECTIONS:
        eps_strict = eps[i] - E
        for j in DIRECTIONS:
            if j != i:
                eps_strict = eps_strict - G[j]
        on_y = on_y + (3 * a[i]) * (eps_strict + epr[i] + (Ni[i] - G[i]))
    return on_h, on_z, on_y


def root_bundles(params: FamilyParams) -> Dict[str, DivClass]:
    """The classes ``L0`` on H, ``L1`` on Z_n and ``L`` on Y_n."""
    n = params.n
    L, M, E, G = (named_class(x, n=n) for x in ("L", "M", "E", "G"))
    fsum = zero_class(n)
    for i, ai in params.a.items():
        fsum = fsum + ai * named_class("F_i", i, n=n)
    if params.spin:
        l0 = (6 * params.p * (6 * params.alpha ** 2 + params.beta ** 2)) * fsum + (6 * params.d) * L
        l1 = l0 - 3 * E
        ly = l1 - M - 3 * G
    else:
        l0 = (3 * params.p * (3 * params.alpha ** 2 + params.beta ** 2)) * fsum + (3 * params.d) * L
        l1 = l0 - 6 * E
        ly = l1 - 2 * M - 6 * G
    return {"L0": l0, "L1": l1, "L": ly}


def root_divisibility_report(
    params: FamilyParams, a: Optional[Dict[str, int]] = None, b: Optional[Sequence[int]] = None
) -> Dict[str, bool]:
    """Compare the branch divisor with ``m`` times the root class on H, Z_n and Y_n.

    ``a`` and ``b`` override the family's coefficients (used to show that a
    perturbed choice breaks divisibility).
    """
    a = dict(params.a if a is None else a)
    b = list(params.b if b is None else b)
    if set(a) != set(DIRECTIONS) or len(b) != params.line_count:
        raise DomainError("coefficient override has the wrong shape")
    m = params.degree
    on_h, on_z, on_y = _branch_classes(params, a, b)
    roots = root_bundles(params)
    return {
        "branch on H ~ m L0": check_equivalence(on_h, m * roots["L0"]),
        "branch on Z_n ~ m L1": check_equivalence(on_z, m * roots["L1"]),
        "branch on Y_n ~ m L": check_equivalence(on_y, m * roots["L"]),
    }


def check_root_divisibility(
    params: FamilyParams, a: Optional[Dict[str, int]] = None, b: Optional[Sequence[int]] = None
) -> bool:
    return all(root_divisibility_report(params, a, b).values())


# ---------------------------------------------------------------------------
# Spin parity
# ---------------------------------------------------------------------------

SYMBOLS = ("L", "N", "G", "M")


def symbolic_parity(substitute_m: bool) -> Tuple[Tuple[int, ...], bool]:
    """Parity of ``-3L + N + G + M`` over the formal symbols ``(L, N, G, M)``.

    Without substituting ``M = 9L - 3N - 3G`` the coefficients are odd; after
    substitution they are ``(6, -2, -2, 0)``.
    """
    v = [-3, 1, 1, 1]
    if substitute_m:
        m = v[3]
        v = [v[0] + 9 * m, v[1] - 3 * m, v[2] - 3 * m, 0]
    return tuple(v), all(c % 2 == 0 for c in v)


def spin_parity_report(params: FamilyParams) -> Dict[str, bool]:
    if not params.spin:
        raise DomainError("spin parity applies to the spin family only")
    n = params.n
    L, N, M, E, G = (named_class(x, n=n) for x in ("L", "N", "M", "E", "G"))
    n_strict = N - G  # every 3-point lies on exactly one N-curve
    k_y = named_class("K_H", n=n) + E + G
    m = params.degree
    canonical_plus_root = k_y + (m - 1) * root_bundles(params)["L"]
    reduced = -3 * L + n_strict + G + M
    diff = canonical_plus_root - reduced
    return {
        "K_Y = -3L + N + E + 2G": check_equivalence(k_y, -3 * L + n_strict + E + 2 * G),
        "M + 3N + 3G ~ 9L": check_equivalence(M + 3 * n_strict + 3 * G, 9 * L),
        "K_Y + (m-1)L = -3L + N + G + M (mod 2)": diff.is_even(),
        "-3L + N + G + M even": reduced.is_even(),
        "K_Y + (m-1)L even": canonical_plus_root.is_even(),
    }


def check_spin_parity(params: FamilyParams) -> bool:
    return all(spin_parity_report(params).values())


def lattice_report(params: FamilyParams) -> Dict[str, bool]:
    """Every lattice identity relevant to one parameter tuple."""
    out = {f"H: {k}": v for k, v in hesse_identities().items()}
    n = params.n
    for i in DIRECTIONS:
        lhs = 3 * named_class("Eps_i", i, n=n) + named_class("M", n=n) + 3 * named_class("N_i", i, n=n)
        rhs = (n * n) * named_class("F_i", i, n=n)
        out.setdefault("3Eps_i + M + 3N_i ~ n^2 F_i", True)
        out["3Eps_i + M + 3N_i ~ n^2 F_i"] &= check_equivalence(lhs, rhs)
    out.update(root_divisibility_report(params))
    if params.spin:
        out.update({f"spin: {k}": v for k, v in spin_parity_report(params).items()})
    return out
