"""Quaternion arithmetic over exact rationals or floats.

A quaternion ``w + x i + y j + z k`` is identified with the point
``(w, x, y, z)`` of R^4, so that unit quaternions are the points of the
unit 3-sphere.  The projective bridge ``gamma`` relates affine points of
S^3 to points ``(x0 : x1 : x2 : x3 : x4)`` of the Moebius quadric
``-x0^2 + x1^2 + x2^2 + x3^2 + x4^2 = 0`` in P^4.

Every function works on both scalar modes: components that are ``int`` or
:class:`fractions.Fraction` stay exact, floats stay floats.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Sequence, Union

Scalar = Union[Fraction, float]

FLOAT_UNIT_TOL = 1e-12


class NotUnitError(ValueError):
    """Raised when an operation needs a unit quaternion and gets another."""


def as_scalar(value, exact: bool = True) -> Scalar:
    """Coerce ``value`` to a Fraction (exact) or float.

    Strings such as ``"3/5"`` are accepted in exact mode.
    """
    if exact:
        if isinstance(value, float):
            raise TypeError("refusing to convert a float to an exact rational")
        return Fraction(value)
    return float(value)


def is_exact(value) -> bool:
    return isinstance(value, Rational)


@dataclass(frozen=True)
class Quaternion:
    w: Scalar
    x: Scalar = 0
    y: Scalar = 0
    z: Scalar = 0

    @classmethod
    def of(cls, coords: Sequence, exact: bool = True) -> "Quaternion":
        w, x, y, z = (as_scalar(c, exact) for c in coords)
        return cls(w, x, y, z)

    def __iter__(self) -> Iterator[Scalar]:
        return iter((self.w, self.x, self.y, self.z))

    def __getitem__(self, i: int) -> Scalar:
        return (self.w, self.x, self.y, self.z)[i]

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return hamilton_product(self, other)
        return Quaternion(*(a * other for a in self))

    def __rmul__(self, other):
        return Quaternion(*(other * a for a in self))

    @property
    def real(self) -> Scalar:
        return self.w

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self)

    def norm2(self) -> Scalar:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def dot(self, other: "Quaternion") -> Scalar:
        return sum((a * b for a, b in zip(self, other)), 0)

    def to_tuple(self) -> tuple:
        return (self.w, self.x, self.y, self.z)


ONE = Quaternion(Fraction(1), Fraction(0), Fraction(0), Fraction(0))
I = Quaternion(Fraction(0), Fraction(1), Fraction(0), Fraction(0))
J = Quaternion(Fraction(0), Fraction(0), Fraction(1), Fraction(0))
K = Quaternion(Fraction(0), Fraction(0), Fraction(0), Fraction(1))


def hamilton_product(a: Quaternion, b: Quaternion) -> Quaternion:
    """Return ``a * b`` with the convention ``i j = k``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def conjugate(q: Quaternion) -> Quaternion:
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def is_unit(q: Quaternion) -> bool:
    if q.exact:
        return q.norm2() == 1
    return abs(q.norm2() - 1) <= FLOAT_UNIT_TOL


@dataclass(frozen=True)
class UnitQuaternion(Quaternion):
    """A quaternion of norm one (exactly, or to 1e-12 in float mode)."""

    def __post_init__(self):
        if not is_unit(self):
            raise NotUnitError(f"{tuple(self)} has squared norm {self.norm2()}")

    @classmethod
    def from_quaternion(cls, q: Quaternion) -> "UnitQuaternion":
        return cls(q.w, q.x, q.y, q.z)


def inverse(q: Quaternion) -> Quaternion:
    """Inverse of a unit quaternion, i.e. its conjugate.

    Exact inputs must have norm exactly one; float inputs within 1e-12.
    """
    if not is_unit(q):
        raise NotUnitError(f"inverse needs a unit quaternion, got norm^2 {q.norm2()}")
    return conjugate(q)


def general_inverse(q: Quaternion) -> Quaternion:
    """Inverse of any nonzero quaternion, ``conj(q) / |q|^2``."""
    n = q.norm2()
    if n == 0:
        raise ZeroDivisionError("zero quaternion has no inverse")
    c = conjugate(q)
    if q.exact:
        return Quaternion(*(Fraction(a) / n for a in c))
    return Quaternion(*(a / n for a in c))


def left_matrix(a: Quaternion) -> list:
    """4x4 matrix of ``x -> a * x`` acting on (w, x, y, z) column vectors."""
    w, x, y, z = a
    return [
        [w, -x, -y, -z],
        [x, w, -z, y],
        [y, z, w, -x],
        [z, -y, x, w],
    ]


def right_matrix(b: Quaternion) -> list:
    """4x4 matrix of ``x -> x * b``."""
    w, x, y, z = b
    return [
        [w, -x, -y, -z],
        [x, w, z, -y],
        [y, -z, w, x],
        [z, y, -x, w],
    ]


class PoleError(ValueError):
    """A point sits where a projection or chart is undefined."""


class ProjectivePoint5:
    """A point ``(x0 : ... : x4)`` of P^4; equality is up to nonzero scale."""

    __slots__ = ("coords",)

    def __init__(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], (int, float, Fraction)):
            coords = tuple(coords[0])
        if len(coords) != 5:
            raise ValueError("a point of P^4 has five homogeneous coordinates")
        if all(c == 0 for c in coords):
            raise ValueError("(0:0:0:0:0) is not a projective point")
        self.coords = tuple(coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self):
        return "ProjectivePoint5(" + ":".join(str(c) for c in self.coords) + ")"

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint5):
            return NotImplemented
        return projectively_equal(self.coords, other.coords)

    __hash__ = None

    def on_moebius_quadric(self) -> bool:
        x0, x1, x2, x3, x4 = self.coords
        return -x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4 == 0


def projectively_equal(p: Sequence, q: Sequence, tol: float | None = None) -> bool:
    """All 2x2 minors of the pair vanish (exactly, or within ``tol``)."""
    if len(p) != len(q):
        return False
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            minor = p[i] * q[j] - p[j] * q[i]
            if tol is None:
                if minor != 0:
                    return False
            elif abs(minor) > tol:
                return False
    return True


def gamma(p: ProjectivePoint5) -> Quaternion:
    """Affine chart ``(x0:...:x4) -> (x1/x0, ..., x4/x0)``."""
    x0 = p[0]
    if x0 == 0:
        raise PoleError("x0 = 0: the point lies on the hyperplane of the elliptic absolute")
    if all(is_exact(c) for c in p):
        x0 = Fraction(x0)
        return Quaternion(*(Fraction(c) / x0 for c in p.coords[1:]))
    return Quaternion(*(float(c) / float(x0) for c in p.coords[1:]))


def gamma_inv(q: Quaternion) -> ProjectivePoint5:
    one = Fraction(1) if q.exact else 1.0
    return ProjectivePoint5(one, q.w, q.x, q.y, q.z)
