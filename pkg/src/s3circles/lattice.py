"""Divisor classes in the rank-2 lattice spanned by l0, l1.

``l0^2 = l1^2 = 0`` and ``l0 . l1 = 1``; a class ``a l0 + b l1`` is stored
as the integer pair ``(a, b)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class InvalidClassError(ValueError):
    """The class pair gives a non-integral arithmetic genus."""


@dataclass(frozen=True)
class DivisorClass:
    a: int
    b: int

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise TypeError("divisor class coefficients must be integers")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.a, -self.b)

    def __rmul__(self, n: int) -> "DivisorClass":
        return DivisorClass(n * self.a, n * self.b)

    def __mul__(self, other: "DivisorClass") -> int:
        return intersect(self, other)

    def __str__(self):
        return f"{self.a}l0 + {self.b}l1"


L0 = DivisorClass(1, 0)
L1 = DivisorClass(0, 1)


def intersect(c: DivisorClass, d: DivisorClass) -> int:
    return c.a * d.b + c.b * d.a


def arithmetic_genus(c: DivisorClass, k: DivisorClass) -> int:
    """``(c^2 + c.k)/2 + 1``; raises if the numerator is odd."""
    num = intersect(c, c) + intersect(c, k)
    if num % 2:
        raise InvalidClassError(f"c^2 + c.k = {num} is odd for c = {c}, k = {k}")
    return num // 2 + 1


def delta_P3(d: int, hk: int) -> Fraction:
    """Total delta of a surface of degree d in P^3: ``d/2 (d - 4) - hk/2``."""
    if d < 1:
        raise ValueError("degree must be positive")
    return Fraction(d * (d - 4), 2) - Fraction(hk, 2)


def delta_S3(d: int, hk: int) -> Fraction:
    """Total delta of a surface of degree d in the Moebius quadric: ``d/2 (d/2 - 3) - hk/2``."""
    if d < 1:
        raise ValueError("degree must be positive")
    return Fraction(d, 2) * (Fraction(d, 2) - 3) - Fraction(hk, 2)


@dataclass(frozen=True)
class DeltaChain:
    """A total delta value compared against a sum of per-component shares."""

    label: str
    total: Fraction
    parts: tuple

    @property
    def residual(self) -> Fraction:
        return self.total - sum(self.parts)

    @property
    def holds(self) -> bool:
        return self.residual == 0

    def __str__(self):
        return f"{self.label}: {self.total} = {' + '.join(map(str, self.parts))}  ({'ok' if self.holds else 'FAIL'})"


# per-component shares for the octic (R, R-bar, V, L, L-bar) and the quartic
# central projection (tau R, tau R-bar, tau V); these are transcribed inputs
OCTIC_COMPONENT_DELTAS = (2, 2, 2, 1, 1)
QUARTIC_COMPONENT_DELTAS = (1, 1, 1)


def consistency_chains() -> list[DeltaChain]:
    h = 2 * L0 + 2 * L1
    k = -h
    octic = DeltaChain("octic in S^3, h = 2l0 + 2l1, k = -h", delta_S3(h * h, h * k), OCTIC_COMPONENT_DELTAS)
    h4 = 2 * L0 + L1
    k4 = -2 * (L0 + L1)
    quartic = DeltaChain("quartic in P^3, h = 2l0 + l1, k = -2(l0 + l1)", delta_P3(4, h4 * k4),
                         QUARTIC_COMPONENT_DELTAS)
    return [octic, quartic]


def sectional_genus_report() -> dict:
    h = 2 * L0 + 2 * L1
    return {
        "h": str(h),
        "h.h": h * h,
        "h.k": h * -h,
        "sectional_genus": arithmetic_genus(h, -h),
        "circle_genus": arithmetic_genus(L0, -h),
    }
