"""Projections, inversions and Clifford translations of S^3.

Also holds the two ruling families of the elliptic absolute
``E = {x0 = 0, x1^2 + x2^2 + x3^2 + x4^2 = 0}``, handled over the Gaussian
rationals so that family membership can be decided exactly.

With ``X = x1 + i x2``, ``Y = x1 - i x2``, ``Z = x3 + i x4``,
``W = x3 - i x4`` the absolute reads ``X Y = -Z W``.  Its lines are

* ``X = mu Z, W = -mu Y``  (every such line is mapped to itself by each
  left translation; labeled ``"left"``)
* ``X = mu W, Z = -mu Y``  (fixed line-by-line by right translations;
  labeled ``"right"``)

together with the limits ``mu = oo``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import rref
from .quat import (
    K,
    PoleError,
    ProjectivePoint5,
    Quaternion,
    conjugate,
    hamilton_product,
    is_exact,
    is_unit,
    left_matrix,
    NotUnitError,
    projectively_equal,
    right_matrix,
)

# Which ruling family left translations fix line by line.  Asserted in tests.
LEFT_FAMILY_FIXED_BY = "left"

DEFAULT_CENTER = K


# --- stereographic projection -------------------------------------------------------


def _rotate_to_default(p: Quaternion, center: Quaternion) -> Quaternion:
    # right multiplication by conj(center) * k is a rotation sending center to k
    if center == DEFAULT_CENTER or tuple(center) == (0, 0, 0, 1):
        return p
    return hamilton_product(p, hamilton_product(conjugate(center), K))


def stereographic(p, center: Quaternion = DEFAULT_CENTER):
    """Project a point of S^3 from ``center`` into R^3.

    For the default center (0,0,0,1) this is ``(x1, x2, x3) / (1 - x4)``.
    Exact input gives a tuple of Fractions, float input a numpy array.
    """
    if not isinstance(p, Quaternion):
        p = Quaternion(*p)
    q = _rotate_to_default(p, center)
    d = 1 - q.z
    if q.exact:
        if d == 0:
            raise PoleError("point is the projection center")
        return (Fraction(q.w) / d, Fraction(q.x) / d, Fraction(q.y) / d)
    if abs(d) < 1e-300:
        raise PoleError("point is the projection center")
    return np.array([q.w, q.x, q.y]) / d


def stereographic_array(pts: np.ndarray, center=None) -> np.ndarray:
    """Vectorized float stereographic projection of an (..., 4) array."""
    pts = np.asarray(pts, float)
    if center is not None and tuple(center) != (0, 0, 0, 1):
        rot = np.array(right_matrix(hamilton_product(conjugate(Quaternion(*center)), K)), float)
        pts = pts @ rot.T
    d = 1.0 - pts[..., 3]
    if np.any(np.abs(d) < 1e-14):
        raise PoleError("a sample coincides with the projection center")
    return pts[..., :3] / d[..., None]


def inverse_stereographic(x, center: Quaternion = DEFAULT_CENTER) -> Quaternion:
    """``x -> (2x, |x|^2 - 1) / (|x|^2 + 1)`` (then rotated for other centers)."""
    exact = all(is_exact(c) for c in x)
    if exact:
        x = [Fraction(c) for c in x]
    rho = sum(c * c for c in x)
    s = rho + 1
    q = Quaternion(2 * x[0] / s, 2 * x[1] / s, 2 * x[2] / s, (rho - 1) / s)
    if center == DEFAULT_CENTER or tuple(center) == (0, 0, 0, 1):
        return q
    # undo the right multiplication by conj(center) * k
    return hamilton_product(q, hamilton_product(conjugate(K), center))


def inversion(center: Sequence, radius):
    """Inversion in the sphere with given center and radius, as a function."""
    c = tuple(center)
    r2 = radius * radius

    def f(x):
        diff = [a - b for a, b in zip(x, c)]
        n2 = sum(d * d for d in diff)
        if n2 == 0:
            raise PoleError("the center of inversion has no image")
        if all(is_exact(t) for t in (*diff, r2)):
            return tuple(Fraction(b) + Fraction(r2) * d / n2 for b, d in zip(c, diff))
        return np.array([b + r2 * d / n2 for b, d in zip(c, diff)], float)

    return f


def fit_circle_3d(points: np.ndarray) -> float:
    """Max residual of the best plane-and-circle (or line) through points of R^3."""
    pts = np.asarray(points, float)
    mean = pts.mean(axis=0)
    _, s, vt = np.linalg.svd(pts - mean)
    normal = vt[2]
    plane_res = np.abs((pts - mean) @ normal).max()
    # in-plane coordinates
    e1, e2 = vt[0], vt[1]
    xy = np.stack([(pts - mean) @ e1, (pts - mean) @ e2], axis=1)
    if s[1] <= 1e-12 * max(s[0], 1.0):
        return float(max(plane_res, np.abs(xy[:, 1]).max()))
    a = np.hstack([xy, np.ones((len(xy), 1))])
    b = (xy**2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    cx, cy = sol[0] / 2, sol[1] / 2
    r = math.sqrt(sol[2] + cx * cx + cy * cy)
    circ_res = np.abs(np.hypot(xy[:, 0] - cx, xy[:, 1] - cy) - r).max()
    return float(max(plane_res, circ_res))


# --- projective maps ------------------------------------------------------------------


QUADRIC = ((-1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1))


def _matmul(a, b):
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), 0) for j in range(len(b[0])))
        for i in range(len(a))
    )


def _transpose(a):
    return tuple(zip(*a))


@dataclass(frozen=True)
class ProjectiveMap5:
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(r) for r in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != 5 or any(len(r) != 5 for r in m):
            raise ValueError("5x5 matrix expected")
        if all(is_exact(x) for r in m for x in r):
            singular = len(rref(m)[1]) < 5
        else:
            singular = abs(np.linalg.det(np.array(m, float))) < 1e-12
        if singular:
            raise ValueError("singular matrix")

    def apply(self, p):
        coords = tuple(p)
        out = tuple(sum((a * x for a, x in zip(row, coords)), 0) for row in self.matrix)
        if isinstance(p, ProjectivePoint5):
            return ProjectivePoint5(out)
        return out

    __call__ = apply

    def compose(self, other: "ProjectiveMap5") -> "ProjectiveMap5":
        """``self o other``."""
        return ProjectiveMap5(_matmul(self.matrix, other.matrix))

    def __eq__(self, other):
        if not isinstance(other, ProjectiveMap5):
            return NotImplemented
        flat_a = [x for r in self.matrix for x in r]
        flat_b = [x for r in other.matrix for x in r]
        return projectively_equal(flat_a, flat_b)

    __hash__ = None

    def preserves_quadric(self) -> bool:
        """``M^T Q M`` is a nonzero multiple of Q."""
        m = self.matrix
        img = _matmul(_transpose(m), _matmul(QUADRIC, m))
        return projectively_equal([x for r in img for x in r], [x for r in QUADRIC for x in r])

    def fixes_absolute_hyperplane(self) -> bool:
        return all(x == 0 for x in self.matrix[0][1:])

    @property
    def elliptic(self) -> bool:
        return self.preserves_quadric() and self.fixes_absolute_hyperplane()


def _block(m4) -> ProjectiveMap5:
    one = 1 if all(is_exact(x) for r in m4 for x in r) else 1.0
    rows = [(one, 0, 0, 0, 0)] + [(0, *r) for r in m4]
    return ProjectiveMap5(tuple(rows))


def _check_unit(a: Quaternion):
    if not is_unit(a):
        raise NotUnitError("Clifford translations need a unit quaternion")


def left_translation(a: Quaternion) -> ProjectiveMap5:
    """The map induced by ``x -> a * x`` on the Moebius quadric."""
    _check_unit(a)
    return _block(left_matrix(a))


def right_translation(b: Quaternion) -> ProjectiveMap5:
    """The map induced by ``x -> x * b``."""
    _check_unit(b)
    return _block(right_matrix(b))


def central_projection(p) -> tuple:
    """``(x0 : x1 : x2 : x3 : x4) -> (x1 : x2 : x3 : x4)``.

    Accepts a :class:`ProjectivePoint5` or an affine point of S^3.
    """
    if isinstance(p, Quaternion):
        coords = tuple(p)
    else:
        coords = tuple(p)[1:]
    if all(c == 0 for c in coords):
        raise PoleError("(1:0:0:0:0) is the center of the central projection")
    return coords


# --- Gaussian rationals and the rulings of the absolute ------------------------------


@dataclass(frozen=True)
class GaussQ:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def lift(x) -> "GaussQ":
        return x if isinstance(x, GaussQ) else GaussQ(Fraction(x))

    def __add__(self, o):
        o = GaussQ.lift(o)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussQ.lift(o)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussQ.lift(o) - self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussQ.lift(o)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussQ.lift(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError
        return self * GaussQ(o.re / n, -o.im / n)

    def conj(self) -> "GaussQ":
        return GaussQ(self.re, -self.im)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = GaussQ(o)
        if not isinstance(o, GaussQ):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)


IU = GaussQ(0, 1)


class NotOnAbsoluteError(ValueError):
    """A point or line is not contained in the elliptic absolute."""


def _xyzw(p) -> tuple:
    _, x1, x2, x3, x4 = (GaussQ.lift(c) for c in p)
    return x1 + IU * x2, x1 - IU * x2, x3 + IU * x4, x3 - IU * x4


def _from_xyzw(X, Y, Z, W) -> tuple:
    half = Fraction(1, 2)
    x1 = (X + Y) * half
    x2 = (X - Y) * GaussQ(0, -half)  # (X - Y) / (2i)
    x3 = (Z + W) * half
    x4 = (Z - W) * GaussQ(0, -half)
    return (GaussQ(0), x1, x2, x3, x4)


def on_absolute(p) -> bool:
    p = [GaussQ.lift(c) for c in p]
    return p[0] == 0 and (p[1] * p[1] + p[2] * p[2] + p[3] * p[3] + p[4] * p[4]) == 0


def _bilinear(p, q):
    return sum((GaussQ.lift(a) * GaussQ.lift(b) for a, b in zip(p[1:], q[1:])), GaussQ(0))


@dataclass(frozen=True)
class GeneratorLine:
    p: tuple
    q: tuple
    family: str

    def __post_init__(self):
        if not (on_absolute(self.p) and on_absolute(self.q)):
            raise NotOnAbsoluteError("spanning points must lie on the absolute")
        if _bilinear(self.p, self.q) != 0:
            raise NotOnAbsoluteError("line leaves the absolute")
        if projectively_equal(self.p, self.q):
            raise ValueError("spanning points coincide")


def generator_line(family: str, mu) -> GeneratorLine:
    """The ruling of the absolute in ``family`` with parameter ``mu``.

    ``mu = None`` selects the limiting line of the family.
    """
    one, zero = GaussQ(1), GaussQ(0)
    if family == "left":
        if mu is None:  # Z = 0, Y = 0
            pts = [_from_xyzw(one, zero, zero, zero), _from_xyzw(zero, zero, zero, one)]
        else:
            mu = GaussQ.lift(mu)
            pts = [_from_xyzw(mu, zero, one, zero), _from_xyzw(zero, one, zero, -mu)]
    elif family == "right":
        if mu is None:  # W = 0, Y = 0
            pts = [_from_xyzw(one, zero, zero, zero), _from_xyzw(zero, zero, one, zero)]
        else:
            mu = GaussQ.lift(mu)
            pts = [_from_xyzw(mu, zero, zero, one), _from_xyzw(zero, one, -mu, zero)]
    else:
        raise ValueError("family must be 'left' or 'right'")
    return GeneratorLine(pts[0], pts[1], family)


def _pairs_proportional(vectors) -> bool:
    nz = [v for v in vectors if v[0] or v[1]]
    return all(a[0] * b[1] == a[1] * b[0] for a in nz for b in nz)


def classify_generator(line: GeneratorLine | tuple) -> str:
    """Decide the ruling family of a line of the absolute spanned by two points."""
    p, q = (line.p, line.q) if isinstance(line, GeneratorLine) else line
    if not (on_absolute(p) and on_absolute(q)) or _bilinear(p, q) != 0:
        raise NotOnAbsoluteError("not a line of the elliptic absolute")
    Xp, Yp, Zp, Wp = _xyzw(p)
    Xq, Yq, Zq, Wq = _xyzw(q)
    if _pairs_proportional([(Xp, Zp), (-Wp, Yp), (Xq, Zq), (-Wq, Yq)]):
        return "left"
    if _pairs_proportional([(Xp, Wp), (-Zp, Yp), (Xq, Wq), (-Zq, Yq)]):
        return "right"
    raise NotOnAbsoluteError("line is in neither ruling")


def apply_to_line(m: ProjectiveMap5, line: GeneratorLine) -> GeneratorLine:
    p = m.apply(line.p)
    q = m.apply(line.q)
    return GeneratorLine(tuple(GaussQ.lift(c) for c in p), tuple(GaussQ.lift(c) for c in q), "?")


def same_line(a: GeneratorLine, b: GeneratorLine) -> bool:
    """Both spanning points of ``b`` lie on ``a`` (rank test over Q(i))."""
    def rank_le_2(vecs):
        # all 3x3 minors of the 3x5 matrix vanish
        from itertools import combinations

        for cols in combinations(range(5), 3):
            m = [[v[c] for c in cols] for v in vecs]
            det = (
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            )
            if det != 0:
                return False
        return True

    return rank_le_2([a.p, a.q, b.p]) and rank_le_2([a.p, a.q, b.q])


# --- projection spec strings -------------------------------------------------------------


@dataclass(frozen=True)
class Projection:
    kind: str  # "stereo" or "central"
    center: Quaternion = DEFAULT_CENTER

    @classmethod
    def parse(cls, spec: str) -> "Projection":
        """Parse ``"stereo:default"``, ``"stereo:cx,cy,cz,cw"`` or ``"central"``."""
        spec = spec.strip()
        if spec == "central":
            return cls("central")
        if spec in ("stereo", "stereo:default"):
            return cls("stereo")
        if spec.startswith("stereo:"):
            parts = spec.split(":", 1)[1].split(",")
            if len(parts) != 4:
                raise ValueError(f"bad projection center {spec!r}")
            try:
                coords = [Fraction(x) for x in parts]
            except ValueError:
                coords = [float(x) for x in parts]
            c = Quaternion(*coords)
            if not is_unit(c):
                raise ValueError("projection center must lie on S^3")
            return cls("stereo", c)
        raise ValueError(f"unknown projection {spec!r}")

    def __str__(self):
        if self.kind == "central":
            return "central"
        if tuple(self.center) == (0, 0, 0, 1):
            return "stereo:default"
        return "stereo:" + ",".join(str(c) for c in self.center)

    @property
    def homogeneous(self) -> bool:
        return self.kind == "central"

    def apply(self, p):
        if self.kind == "central":
            return central_projection(p if isinstance(p, Quaternion) else Quaternion(*p))
        return stereographic(p, self.center)

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        """Float projection of an (..., 4) array.

        The central projection keeps the 4-vectors as homogeneous coordinates
        of P^3; antipodal samples then represent the same point.
        """
        if self.kind == "central":
            return np.asarray(pts, float)
        return stereographic_array(pts, None if tuple(self.center) == (0, 0, 0, 1) else tuple(self.center))
