"""Exact number-theoretic kernel.

Dedekind sums, Hirzebruch-Jung continued fractions, resolution data of
cyclic quotient singularities ``1/m (1, q)`` and the modular equation that
assigns a singularity type to a node of a branch divisor.

All rational values are :class:`fractions.Fraction`, exposed here under the
name :data:`Rational`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

from .errors import DomainError, InconsistencyError

Rational = Fraction

__all__ = [
    "Rational",
    "HJChain",
    "CqsResolution",
    "hj_expand",
    "hj_evaluate",
    "hj_length",
    "dedekind_sum",
    "dedekind_sum_naive",
    "c_coeff",
    "node_q",
    "resolve_cqs",
    "solve_tridiagonal",
    "is_prime",
    "next_prime",
    "primes_from",
]


def _check_pair(q: int, m: int) -> None:
    if not (isinstance(q, int) and isinstance(m, int)):
        raise DomainError(f"expected integers, got q={q!r}, m={m!r}")
    if m < 2 or not 0 < q < m:
        raise DomainError(f"need 0 < q < m and m > 1, got q={q}, m={m}")
    if gcd(q, m) != 1:
        raise DomainError(f"q={q} and m={m} are not coprime")


# ---------------------------------------------------------------------------
# Hirzebruch-Jung continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HJChain:
    m: int
    q: int
    coefficients: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.coefficients)

    def value(self) -> Fraction:
        return hj_evaluate(self.coefficients)

    def reversed(self) -> "HJChain":
        """Chain of ``m/q'`` where ``q q' = 1 (mod m)``."""
        return HJChain(self.m, pow(self.q, -1, self.m), self.coefficients[::-1])


def hj_expand(m: int, q: int) -> HJChain:
    """Expand ``m/q = e1 - 1/(e2 - 1/(... - 1/el))`` with every ``ek >= 2``."""
    _check_pair(q, m)
    coeffs = []
    a, b = m, q
    while b:
        e = -(-a // b)
        coeffs.append(e)
        a, b = b, e * b - a
    return HJChain(m, q, tuple(coeffs))


def hj_evaluate(coefficients: Sequence[int]) -> Fraction:
    if not coefficients:
        raise DomainError("empty continued fraction")
    value = Fraction(coefficients[-1])
    for e in reversed(coefficients[:-1]):
        value = e - 1 / value
    return value


def hj_length(q: int, m: int) -> int:
    """The length ``l(q, m)`` of the expansion of ``m/q``."""
    return hj_expand(m, q).length


# ---------------------------------------------------------------------------
# Dedekind sums
# ---------------------------------------------------------------------------


def dedekind_sum(q: int, m: int) -> Fraction:
    """Dedekind sum ``s(q, m)`` via the reciprocity law.

    Runs the Euclidean algorithm on ``(q, m)``, using
    ``s(h,k) + s(k,h) = (h/k + k/h + 1/(hk))/12 - 1/4`` and
    ``s(h,k) = s(h mod k, k)`` at each step.
    """
    _check_pair(q, m)
    total = Fraction(0)
    sign = 1
    h, k = q, m
    while h:
        total += sign * (Fraction(h * h + k * k + 1, 12 * h * k) - Fraction(1, 4))
        sign = -sign
        h, k = k % h, h
    return total


def dedekind_sum_naive(q: int, m: int) -> Fraction:
    """``sum_{i=1}^{m-1} ((i/m)) ((iq/m))`` evaluated term by term.

    For coprime ``(q, m)`` neither ``i/m`` nor ``iq/m`` is an integer, so
    ``((x)) = x - floor(x) - 1/2`` and each term equals
    ``(2i - m)(2(iq mod m) - m) / (4 m^2)``.
    """
    _check_pair(q, m)
    acc = sum((2 * i - m) * (2 * (i * q % m) - m) for i in range(1, m))
    return Fraction(acc, 4 * m * m)


def c_coeff(q: int, m: int) -> Fraction:
    """``12 s(q, m) + l(q, m)``, the defect of one node in ``c1^2``."""
    return 12 * dedekind_sum(q, m) + hj_length(q, m)


def node_q(nu_i: int, nu_j: int, m: int) -> int:
    """The ``q`` in ``(0, m)`` with ``nu_i + q nu_j = 0 (mod m)``.

    Multiplicities are reduced mod ``m`` first; both must be units mod ``m``.
    """
    if m < 2:
        raise DomainError(f"cover degree must be >= 2, got {m}")
    a, b = nu_i % m, nu_j % m
    for nu in (a, b):
        if gcd(nu, m) != 1:
            raise DomainError(f"multiplicity {nu} (mod {m}) is not coprime to {m}")
    return (-a * pow(b, -1, m)) % m


# ---------------------------------------------------------------------------
# Resolution of 1/m (1, q)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CqsResolution:
    m: int
    q: int
    chain_self_intersections: Tuple[int, ...]
    discrepancies: Tuple[Fraction, ...]
    pullback_pairs: Tuple[Tuple[int, int], ...]

    @property
    def length(self) -> int:
        return len(self.chain_self_intersections)

    def intersection_matrix(self) -> List[List[int]]:
        n = self.length
        mat = [[0] * n for _ in range(n)]
        for k, s in enumerate(self.chain_self_intersections):
            mat[k][k] = s
            if k + 1 < n:
                mat[k][k + 1] = mat[k + 1][k] = 1
        return mat


def solve_tridiagonal(diag: Sequence[int], rhs: Sequence) -> List[Fraction]:
    """Solve ``T x = rhs`` exactly, where ``T`` has ``diag`` on the diagonal
    and 1 on both off-diagonals (the intersection matrix of a chain)."""
    n = len(diag)
    if n != len(rhs):
        raise ValueError("size mismatch")
    d = [Fraction(v) for v in diag]
    r = [Fraction(v) for v in rhs]
    for k in range(1, n):
        w = 1 / d[k - 1]
        d[k] -= w
        r[k] -= w * r[k - 1]
    x = [Fraction(0)] * n
    x[-1] = r[-1] / d[-1]
    for k in range(n - 2, -1, -1):
        x[k] = (r[k] - x[k + 1]) / d[k]
    return x


def resolve_cqs(m: int, q: int) -> CqsResolution:
    """Minimal resolution data of the cyclic quotient singularity ``1/m (1, q)``.

    Discrepancies come from the adjunction system
    ``sum_j disc_j (R_j . R_k) = -2 - R_k^2``. The pullback pairs come from
    the independent system ``f^*(A) . R_k = 0`` with one branch meeting each
    end of the chain; the two routes are required to agree through
    ``disc_k = -1 + (c_k + d_k)/m``.
    """
    chain = hj_expand(m, q)
    selfint = tuple(-e for e in chain.coefficients)
    n = chain.length

    discs = solve_tridiagonal(selfint, [e - 2 for e in chain.coefficients])

    first = [0] * n
    last = [0] * n
    first[0] -= m
    last[-1] -= m
    cs = solve_tridiagonal(selfint, first)
    ds = solve_tridiagonal(selfint, last)
    pairs = []
    for k in range(n):
        c, d = cs[k], ds[k]
        if c.denominator != 1 or d.denominator != 1 or not (0 < c < m and 0 < d < m):
            raise InconsistencyError("integral pullback coefficients", f"at R_{k + 1}")
        if discs[k] != -1 + (c + d) / m:
            raise InconsistencyError("discrepancy = -1 + (c + d)/m", f"at R_{k + 1}")
        pairs.append((int(c), int(d)))
    return CqsResolution(m, q, selfint, tuple(discs), tuple(pairs))


# ---------------------------------------------------------------------------
# Primes
# ---------------------------------------------------------------------------

# First thirteen primes: deterministic Miller-Rabin below 3.3e24. Twelve
# bases are not enough there; 318665857834031151167461 fools 2..37.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise DomainError(f"{n} exceeds the deterministic primality range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def primes_from(start: int, count: int) -> List[int]:
    out = []
    p = start
    while len(out) < count:
        p = next_prime(p)
        out.append(p)
        p += 1
    return out
