"""Parameters of the spin and non-spin families."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List

from .errors import DomainError
from .numtheory import is_prime

SPIN = "spin"
NONSPIN = "nonspin"
VARIANTS = (SPIN, NONSPIN)

DIRECTIONS = ("0", "1", "zeta", "inf")
# a_0 = a_1 = 1; a_zeta = a_inf take the high value
LOW_DIRECTIONS = ("0", "1")
HIGH_DIRECTIONS = ("zeta", "inf")


@dataclass(frozen=True)
class FamilyParams:
    variant: str
    alpha: int
    beta: int
    d: int
    p: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        for name in ("alpha", "beta", "d", "p"):
            if not isinstance(getattr(self, name), int):
                raise DomainError(f"{name} must be an integer")
        if self.alpha < 1:
            raise DomainError("alpha must be >= 1")
        if self.beta < 0:
            raise DomainError("beta must be >= 0")
        if self.d < 1:
            raise DomainError("d must be >= 1")
        if self.p < 5 or not is_prime(self.p):
            raise DomainError(f"p must be a prime >= 5, got {self.p}")
        if self.variant == NONSPIN and not 3 <= 2 * self.d <= self.p:
            raise DomainError(f"non-spin family needs 3 <= 2d <= p, got d={self.d}, p={self.p}")

    @property
    def spin(self) -> bool:
        return self.variant == SPIN

    @property
    def n(self) -> int:
        return (12 if self.spin else 3) * self.alpha * self.p

    @property
    def degree(self) -> int:
        return 4 * self.p if self.spin else self.p

    @property
    def high(self) -> int:
        """The large coefficient ``a_inf = a_zeta``; also ``b_i`` on the second half of the lines."""
        return 2 * self.p - 1 if self.spin else self.p - 1

    @property
    def eprime_count(self) -> int:
        """General fibres added per direction."""
        return (8 if self.spin else 1) * self.beta ** 2 * self.p ** 2

    @property
    def line_count(self) -> int:
        return (8 if self.spin else 2) * self.d

    @property
    def a(self) -> Dict[str, int]:
        return {i: (1 if i in LOW_DIRECTIONS else self.high) for i in DIRECTIONS}

    @property
    def b(self) -> List[int]:
        half = self.line_count // 2
        return [1] * half + [self.high] * half

    @property
    def eps_count(self) -> int:
        """Curves of the elliptic arrangement per direction, ``(n^2 - 3)/3``."""
        return (self.n ** 2 - 3) // 3

    def to_dict(self) -> dict:
        return {"variant": self.variant, "alpha": self.alpha, "beta": self.beta, "d": self.d, "p": self.p}

    @classmethod
    def from_dict(cls, data: dict) -> "FamilyParams":
        return cls(str(data["variant"]), int(data["alpha"]), int(data["beta"]), int(data["d"]), int(data["p"]))
