"""Circles in S^3: plane-pair form, rational parametrizations, intersections.

A circle is stored in plane-pair form ``S^3 ∩ {x.n1 = d1} ∩ {x.n2 = d2}``.
In exact mode the normals are orthogonal rational vectors that need not be
unit length (unit normals are rarely rational); ``d1`` and ``d2`` are the
offsets for those very normals.

Rational parametrizations use a projective parameter ``(v : w)`` so that the
point at ``w = 0`` is not lost.  Each coordinate is ``num_k(v, w) / den(v, w)``
with binary quadratic forms stored as ``(c_ww, c_vw, c_vv)``, i.e. the
coefficient of ``v^k w^(2-k)`` at index k (see :mod:`s3circles.forms`).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import forms
from .linalg import nullspace
from .quat import Quaternion, is_exact

FLOAT_TOL = 1e-12
NUMERIC_TANGENT_TOL = 1e-10


class DegenerateCircleError(ValueError):
    """Input does not describe a circle of positive radius."""


class NotTransversalError(ValueError):
    """The small circle lies inside both hyperplanes of the great circle."""


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), 0)


@dataclass(frozen=True)
class Circle:
    n1: tuple
    n2: tuple
    d1: object = 0
    d2: object = 0

    def __post_init__(self):
        n1, n2 = tuple(self.n1), tuple(self.n2)
        object.__setattr__(self, "n1", n1)
        object.__setattr__(self, "n2", n2)
        if len(n1) != 4 or len(n2) != 4:
            raise DegenerateCircleError("normals must live in R^4")
        a, b = _dot(n1, n1), _dot(n2, n2)
        if a == 0 or b == 0:
            raise DegenerateCircleError("zero normal")
        ortho = _dot(n1, n2)
        if self.exact:
            if ortho != 0:
                raise DegenerateCircleError("normals are not orthogonal")
        elif abs(ortho) > FLOAT_TOL * math.sqrt(a * b):
            raise DegenerateCircleError("normals are not orthogonal")
        r2 = self.radius2
        if r2 <= 0 if self.exact else r2 <= FLOAT_TOL:
            raise DegenerateCircleError(f"empty or point circle (radius^2 = {r2})")

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in (*self.n1, *self.n2, self.d1, self.d2))

    @property
    def radius2(self):
        a, b = _dot(self.n1, self.n1), _dot(self.n2, self.n2)
        if self.exact:
            return 1 - Fraction(self.d1) ** 2 / a - Fraction(self.d2) ** 2 / b
        return 1 - self.d1**2 / a - self.d2**2 / b

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius2)

    @property
    def center(self) -> tuple:
        a, b = _dot(self.n1, self.n1), _dot(self.n2, self.n2)
        if self.exact:
            s, t = Fraction(self.d1) / a, Fraction(self.d2) / b
        else:
            s, t = self.d1 / a, self.d2 / b
        return tuple(s * x + t * y for x, y in zip(self.n1, self.n2))

    def frame(self) -> tuple[np.ndarray, np.ndarray]:
        """Orthonormal (u, v) completing the normals, by Gram-Schmidt on e1..e4."""
        basis = [np.asarray(self.n1, float), np.asarray(self.n2, float)]
        basis = [b / np.linalg.norm(b) for b in basis]
        found = []
        for k in range(4):
            e = np.zeros(4)
            e[k] = 1.0
            for b in basis + found:
                e = e - np.dot(e, b) * b
            nrm = np.linalg.norm(e)
            if nrm > 1e-9:
                found.append(e / nrm)
            if len(found) == 2:
                break
        return found[0], found[1]

    def contains(self, x, tol: float = 1e-9) -> bool:
        vals = (_dot(x, x) - 1, _dot(x, self.n1) - self.d1, _dot(x, self.n2) - self.d2)
        if self.exact and all(is_exact(c) for c in x):
            return all(v == 0 for v in vals)
        return all(abs(float(v)) <= tol for v in vals)

    def to_float(self) -> "Circle":
        return Circle(tuple(map(float, self.n1)), tuple(map(float, self.n2)), float(self.d1), float(self.d2))


def is_great(c: Circle) -> bool:
    """A great circle is cut out by two hyperplanes through the origin."""
    if c.exact:
        return c.d1 == 0 and c.d2 == 0
    return abs(c.d1) <= FLOAT_TOL and abs(c.d2) <= FLOAT_TOL


def parametrize(c: Circle) -> Callable[[float], np.ndarray]:
    """Angle parametrization ``theta -> center + r (cos theta u + sin theta v)``."""
    center = np.asarray(c.center, float)
    r = c.radius
    u, v = c.frame()

    def point(theta):
        theta = np.asarray(theta, float)
        return center + r * (np.cos(theta)[..., None] * u + np.sin(theta)[..., None] * v)

    return point


@dataclass(frozen=True)
class RationalCircleParam:
    """``(v:w) -> (num_1, ..., num_4) / den`` with integer binary quadratics."""

    nums: tuple
    den: tuple
    name: str = ""

    def __post_init__(self):
        nums = tuple(tuple(f) for f in self.nums)
        object.__setattr__(self, "nums", nums)
        object.__setattr__(self, "den", tuple(self.den))
        if len(nums) != 4 or any(len(f) != 3 for f in nums) or len(self.den) != 3:
            raise ValueError("need four quadratic numerators and one quadratic denominator")

    def numerators_at(self, v, w) -> tuple:
        return tuple(forms.form_eval(f, v, w) for f in self.nums)

    def denominator_at(self, v, w):
        return forms.form_eval(self.den, v, w)

    def point(self, v, w=1) -> Quaternion:
        """Exact point for rational (v, w); float point for float input."""
        d = self.denominator_at(v, w)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at ({v}:{w})")
        nums = self.numerators_at(v, w)
        if is_exact(v) and is_exact(w):
            return Quaternion(*(Fraction(n) / d for n in nums))
        return Quaternion(*(float(n) / float(d) for n in nums))

    def at_angle(self, theta) -> np.ndarray:
        """Float points for angles theta, with (v:w) = (sin(theta/2) : cos(theta/2))."""
        theta = np.asarray(theta, float)
        v, w = np.sin(theta / 2), np.cos(theta / 2)
        den = self.den[0] * w * w + self.den[1] * v * w + self.den[2] * v * v
        cols = [(f[0] * w * w + f[1] * v * w + f[2] * v * v) / den for f in self.nums]
        return np.stack(cols, axis=-1)

    def at_angle_with_derivative(self, theta) -> tuple[np.ndarray, np.ndarray]:
        """Points and their derivatives with respect to the angle."""
        theta = np.asarray(theta, float)
        v, w = np.sin(theta / 2), np.cos(theta / 2)
        dv, dw = w / 2, -v / 2

        def val(f):
            return f[0] * w * w + f[1] * v * w + f[2] * v * v

        def der(f):
            return (2 * f[0] * w + f[1] * v) * dw + (f[1] * w + 2 * f[2] * v) * dv

        den, dden = val(self.den), der(self.den)
        pts = [val(f) / den for f in self.nums]
        ders = [(der(f) - val(f) * dden / den) / den for f in self.nums]
        return np.stack(pts, axis=-1), np.stack(ders, axis=-1)

    def to_json(self) -> dict:
        return {"nums": [list(map(str, f)) for f in self.nums], "den": list(map(str, self.den))}


def _weierstrass_circle(coeffs, name: str) -> RationalCircleParam:
    """Substitute cos = (w^2 - v^2)/(w^2 + v^2), sin = 2vw/(w^2 + v^2).

    ``coeffs`` lists, for each of the four coordinates and the denominator,
    the triple (c0, c_cos, c_sin) of ``c0 + c_cos cos(t) + c_sin sin(t)``.
    """
    def conv(c0, cc, cs):
        # (c0 (w^2+v^2) + cc (w^2 - v^2) + cs 2vw) in (ww, vw, vv) order
        return (c0 + cc, 2 * cs, c0 - cc)

    *nums, den = [conv(*c) for c in coeffs]
    return RationalCircleParam(tuple(nums), den, name)


PRESETS = {
    # (cos a, sin a, 0, 0)
    "A0": ((0, 1, 0), (0, 0, 1), (0, 0, 0), (0, 0, 0), (1, 0, 0)),
    # (12 + 8 cos, 8 sin, 0, 9 + 12 cos) / (17 + 12 cos)
    "B1": ((12, 8, 0), (0, 0, 8), (0, 0, 0), (9, 12, 0), (17, 12, 0)),
    # (2 + cos, sin, 0, 2 + 2 cos) / (3 + 2 cos)
    "B2": ((2, 1, 0), (0, 0, 1), (0, 0, 0), (2, 2, 0), (3, 2, 0)),
    # (6 + 2 cos, 2 sin, 0, 9 + 6 cos) / (11 + 6 cos)
    "B3": ((6, 2, 0), (0, 0, 2), (0, 0, 0), (9, 6, 0), (11, 6, 0)),
    # great circle through 1 and j: (cos, 0, sin, 0)
    "C": ((0, 1, 0), (0, 0, 0), (0, 0, 1), (0, 0, 0), (1, 0, 0)),
}


def named_circle(preset: str) -> RationalCircleParam:
    """The circles A0, B1, B2, B3 of the normal forms, plus the great circle C."""
    try:
        coeffs = PRESETS[preset]
    except KeyError:
        raise KeyError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}") from None
    return _weierstrass_circle(coeffs, preset)


def on_sphere_certificate(p: RationalCircleParam) -> bool:
    """Exact polynomial identity ``sum num_k^2 == den^2``."""
    total = (0, 0, 0, 0, 0)
    for f in p.nums:
        total = forms.form_add(total, forms.form_mul(f, f))
    return total == forms.form_mul(p.den, p.den)


def is_proper(p: RationalCircleParam) -> bool:
    """True when numerators and denominator share no common root (injective map)."""
    g = p.den
    for f in p.nums:
        if not forms.is_zero(f):
            g = forms.form_gcd(g, f)
    return len(g) == 1


def _sample_params():
    return [(0, 1), (1, 0), (1, 1), (-1, 1), (1, 2), (2, 1), (-1, 2), (3, 1)]


def plane_form(p: RationalCircleParam) -> Circle:
    """Exact plane-pair form fitted through sampled points of ``p``.

    The two affine forms are taken from the reduced echelon basis of the
    kernel of ``[x1 x2 x3 x4 -1]`` and then orthogonalized.
    """
    rows = []
    for v, w in _sample_params():
        if p.denominator_at(v, w) == 0:
            continue
        q = p.point(Fraction(v), Fraction(w))
        rows.append([*q, Fraction(-1)])
    ker = nullspace(rows, 5)
    if len(ker) != 2:
        raise DegenerateCircleError(f"points span a {4 - len(ker)}-dimensional affine space, not a plane")
    from .linalg import rref

    red, _ = rref(ker)
    (a, da), (b, db) = [(tuple(r[:4]), r[4]) for r in red]
    # Gram-Schmidt on the normals, carrying offsets along
    t = _dot(a, b) / _dot(a, a)
    b = tuple(y - t * x for x, y in zip(a, b))
    db = db - t * da
    return Circle(_clean(a), _clean(b), da, db)


def _clean(v):
    return tuple(Fraction(x) for x in v)


def fit_circle(points: np.ndarray) -> tuple[Circle, float]:
    """Least-squares plane-pair circle through float points of S^3.

    Returns the circle and the maximal residual of the affine fit.
    """
    pts = np.asarray(points, float)
    a = np.hstack([pts, -np.ones((len(pts), 1))])
    _, s, vt = np.linalg.svd(a)
    k1, k2 = vt[-1], vt[-2]
    n1, d1 = k1[:4], k1[4]
    n2, d2 = k2[:4], k2[4]
    t = np.dot(n1, n2) / np.dot(n1, n1)
    n2, d2 = n2 - t * n1, d2 - t * d1
    s1, s2 = np.linalg.norm(n1), np.linalg.norm(n2)
    n1, d1, n2, d2 = n1 / s1, d1 / s1, n2 / s2, d2 / s2
    resid = max(np.abs(pts @ n1 - d1).max(), np.abs(pts @ n2 - d2).max())
    return Circle(tuple(n1), tuple(n2), float(d1), float(d2)), float(resid)


@dataclass(frozen=True)
class Meeting:
    q: int
    tangent: bool
    roots: tuple  # real projective roots (v, w); rational when available, else floats
    common_form: tuple


def meet_great_circle(small: RationalCircleParam, great: Circle) -> Meeting:
    """Count real common points of a parametrized circle with a great circle.

    The two linear forms of ``great`` composed with the parametrization give
    two binary quadratics; their common real roots are the intersections.
    """
    if not is_great(great):
        raise ValueError("second argument must be a great circle")
    quads = []
    for n in (great.n1, great.n2):
        f = (0, 0, 0)
        for coef, num in zip(n, small.nums):
            f = forms.form_add(f, forms.form_scale(num, coef))
        quads.append(f)
    if all(forms.is_zero(f) for f in quads):
        raise NotTransversalError("small circle lies in the plane of the great circle")
    g = forms.form_gcd(*quads)
    if not great.exact or not all(is_exact(c) for c in g):
        return _meet_float(g)
    q, tangent = forms.real_root_count(g) if len(g) > 1 else (0, False)
    return Meeting(q, tangent, _real_roots(g), g)


def _real_roots(g) -> tuple:
    deg = len(g) - 1
    if deg == 0:
        return ()
    if deg == 1:
        # c0 w + c1 v = 0
        c0, c1 = g
        return ((-Fraction(c0), Fraction(c1)),) if c1 != 0 else ((Fraction(1), Fraction(0)),)
    c0, c1, c2 = g
    disc = forms.quadratic_discriminant(g)
    if disc < 0:
        return ()
    if c2 == 0:
        # w divides g: root at infinity plus the root of c0 w + c1 v
        roots = [(Fraction(1), Fraction(0))]
        if c1 != 0:
            roots.append((-Fraction(c0), Fraction(c1)))
        return tuple(dict.fromkeys(roots))
    # c2 v^2 + c1 v w + c0 w^2 with w = 1
    sq = _rational_sqrt(disc)
    if sq is not None:
        r = {((-c1 + sq) / (2 * c2), Fraction(1)), ((-c1 - sq) / (2 * c2), Fraction(1))}
        return tuple(sorted(r))
    s = math.sqrt(disc)
    return tuple(sorted({((-c1 + s) / (2 * c2), 1.0), ((-c1 - s) / (2 * c2), 1.0)}))


def _rational_sqrt(x: Fraction):
    x = Fraction(x)
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _meet_float(g) -> Meeting:
    import warnings

    deg = len(g) - 1
    if deg < 2:
        q = deg
        return Meeting(q, False, (), tuple(map(float, g)))
    c0, c1, c2 = map(float, g)
    disc = c1 * c1 - 4 * c0 * c2
    scale = max(abs(c0), abs(c1), abs(c2)) ** 2
    if abs(disc) < NUMERIC_TANGENT_TOL * scale:
        warnings.warn("numerically tangent intersection; use exact input for a certificate")
        return Meeting(1, True, (), (c0, c1, c2))
    return Meeting(2 if disc > 0 else 0, False, (), (c0, c1, c2))


# --- rational parametrization of a plane-pair circle ------------------------------


def rational_parametrization(c: Circle) -> RationalCircleParam:
    """Rational parametrization of an exact circle that has a rational point.

    The circle is ``center + s u + t v`` with ``|u|^2 s^2 + |v|^2 t^2 = r^2``
    for a rational orthogonal basis (u, v) of the plane; a rational point of
    this conic is found with sympy's ternary quadratic solver.
    """
    if not c.exact:
        raise ValueError("exact circle required")
    from sympy import Rational as R
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic
    from sympy import symbols

    center = c.center
    n1, n2 = _clean(c.n1), _clean(c.n2)
    basis = []
    for k in range(4):
        e = [Fraction(int(i == k)) for i in range(4)]
        for b in [n1, n2] + basis:
            t = _dot(e, b) / _dot(b, b)
            e = [x - t * y for x, y in zip(e, b)]
        if any(e):
            basis.append(e)
        if len(basis) == 2:
            break
    u, v = basis
    uu, vv, r2 = _dot(u, u), _dot(v, v), c.radius2
    # uu s^2 + vv t^2 = r2 z^2 on integers
    den = math.lcm(uu.denominator, vv.denominator, r2.denominator)
    A, B, C = int(uu * den), int(vv * den), int(r2 * den)
    x, y, z = symbols("x y z", integer=True)
    sol = diop_ternary_quadratic(A * x**2 + B * y**2 - C * z**2)
    if sol is None or sol == (None, None, None) or sol[2] == 0:
        raise DegenerateCircleError("circle has no rational point; exact parametrization impossible")
    s0, t0 = Fraction(int(sol[0]), int(sol[2])), Fraction(int(sol[1]), int(sol[2]))
    # line through (s0, t0) with direction (w, v): second intersection
    # point(v:w) = (s0, t0) + lam (w, v), lam = -2 (uu s0 w + vv t0 v) / (uu w^2 + vv v^2)
    # homogeneous coordinates with denominator uu w^2 + vv v^2
    den_form = (uu, Fraction(0), vv)
    s_form = (s0 * uu - 2 * uu * s0, -2 * vv * t0, s0 * vv)
    t_form = (t0 * uu, -2 * uu * s0, t0 * vv - 2 * vv * t0)
    nums = []
    for k in range(4):
        f = tuple(center[k] * dcoef + u[k] * sc + v[k] * tc for dcoef, sc, tc in zip(den_form, s_form, t_form))
        nums.append(f)
    allc = forms.primitive([x for f in nums for x in f] + list(den_form))
    ints = [allc[i:i + 3] for i in range(0, 15, 3)]
    den = ints[4]
    if den[0] < 0 or den[2] < 0:
        ints = [tuple(-x for x in f) for f in ints]
        den = ints[4]
    return RationalCircleParam(tuple(ints[:4]), den)


# --- JSON ----------------------------------------------------------------------


def _frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def circle_to_json(c: Circle) -> dict:
    return {
        "n1": [_frac_str(x) for x in c.n1],
        "n2": [_frac_str(x) for x in c.n2],
        "d1": _frac_str(c.d1),
        "d2": _frac_str(c.d2),
    }


def circle_from_json(obj) -> Circle | RationalCircleParam:
    """Parse a circle spec: plane-pair dict, ``{"preset": ...}`` or ``{"nums", "den"}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if "preset" in obj:
        return named_circle(obj["preset"])
    if "nums" in obj:
        return RationalCircleParam(
            tuple(tuple(int(Fraction(x)) for x in f) for f in obj["nums"]),
            tuple(int(Fraction(x)) for x in obj["den"]),
        )
    return Circle(
        tuple(Fraction(x) for x in obj["n1"]),
        tuple(Fraction(x) for x in obj["n2"]),
        Fraction(obj["d1"]),
        Fraction(obj["d2"]),
    )


def as_param(spec) -> RationalCircleParam:
    """Coerce a preset name, JSON spec, Circle or parametrization to a parametrization."""
    if isinstance(spec, RationalCircleParam):
        return spec
    if isinstance(spec, Circle):
        return rational_parametrization(spec)
    if isinstance(spec, str):
        if spec in PRESETS:
            return named_circle(spec)
        spec = json.loads(spec)
    return as_param(circle_from_json(spec))
