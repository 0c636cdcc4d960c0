"""Exact implicitization and degree certification of projected product surfaces.

Samples are exact rational points of the projected surface, kept as
integer homogeneous 4-tuples ``(X : Y : Z : T)``.  For an affine basis the
monomial ``x^a y^b z^c`` of degree ``<= d`` is evaluated as
``X^a Y^b Z^c T^(d-a-b-c)``, which only rescales each row and keeps the
evaluation matrix integral.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, gcd, lcm
from typing import Sequence

import numpy as np

from . import forms
from .circles import RationalCircleParam
from .linalg import bareiss_nullspace, modular_nullspace
from .moebius import Projection, stereographic
from .product import ProductSurface
from .quat import PoleError, Quaternion

SAMPLE_HEIGHT = 40
EXTRA_ROWS = 40
FRESH_SAMPLES = 50


class CertificationError(RuntimeError):
    """No vanishing polynomial up to the requested degree, or a failed re-check."""


class NotOnSurfaceError(ValueError):
    """A curve point does not lie on the zero set of the polynomial."""


@dataclass(frozen=True)
class MonomialBasis:
    nvars: int
    degree: int
    homogeneous: bool = False

    def __post_init__(self):
        if self.homogeneous and self.nvars != 4 or not self.homogeneous and self.nvars != 3:
            raise ValueError("use 3 affine or 4 homogeneous variables")

    @property
    def exponents(self) -> list[tuple]:
        """Graded lexicographic order: by degree, then lexicographically descending."""
        degrees = [self.degree] if self.homogeneous else range(self.degree + 1)
        out = []
        for d in degrees:
            block = []
            for combo in combinations_with_replacement(range(self.nvars), d):
                block.append(tuple(combo.count(k) for k in range(self.nvars)))
            out += sorted(block, reverse=True)
        return out

    @property
    def size(self) -> int:
        return comb(self.degree + 3, 3)

    def row(self, point: Sequence[int]) -> list[int]:
        """Integer evaluation row at a homogeneous point (X, Y, Z, T)."""
        X = list(point)
        pw = [[1] * (self.degree + 1) for _ in range(4)]
        for k in range(4):
            for e in range(1, self.degree + 1):
                pw[k][e] = pw[k][e - 1] * X[k]
        row = []
        for ex in self.exponents:
            if self.homogeneous:
                e = ex
            else:
                e = (*ex, self.degree - sum(ex))
            val = 1
            for k in range(4):
                val *= pw[k][e[k]]
            row.append(val)
        return row


@dataclass(frozen=True, eq=False)
class ImplicitPoly:
    basis: MonomialBasis
    coeffs: tuple

    def __post_init__(self):
        if all(c == 0 for c in self.coeffs):
            raise ValueError("zero polynomial")
        if len(self.coeffs) != self.basis.size:
            raise ValueError("coefficient count does not match the basis")
        object.__setattr__(self, "coeffs", forms.primitive(self.coeffs))

    @property
    def degree(self) -> int:
        return self.basis.degree

    def terms(self) -> dict:
        return {e: c for e, c in zip(self.basis.exponents, self.coeffs) if c}

    def __eq__(self, other):
        return isinstance(other, ImplicitPoly) and self.basis == other.basis and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.basis, self.coeffs))

    def __call__(self, point) -> Fraction:
        """Exact value at an affine rational point (or a homogeneous one for 4 vars)."""
        return _eval_terms(self.terms(), point)

    def gradient(self, point) -> tuple:
        return tuple(_eval_terms(_diff(self.terms(), k), point) for k in range(self.basis.nvars))

    def evaluate_float(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, float)
        ex = np.array(self.basis.exponents)
        coef = np.array(self.coeffs, float)
        mons = np.prod(pts[:, None, :] ** ex[None, :, :], axis=2)
        return mons @ coef

    def scale(self) -> float:
        return float(max(abs(c) for c in self.coeffs))

    def to_json(self) -> dict:
        return {
            "vars": self.basis.nvars,
            "degree": self.basis.degree,
            "order": "grlex",
            "coeffs": [f"{c}/1" for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj) -> "ImplicitPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj.get("order", "grlex") != "grlex":
            raise ValueError("only grlex order is supported")
        basis = MonomialBasis(obj["vars"], obj["degree"], obj["vars"] == 4)
        return cls(basis, tuple(Fraction(c) for c in obj["coeffs"]))

    def to_sympy(self):
        import sympy

        names = "x y z" if self.basis.nvars == 3 else "x1 x2 x3 x4"
        xs = sympy.symbols(names)
        return sum(c * sympy.prod([x**e for x, e in zip(xs, ex)]) for ex, c in self.terms().items())


def _eval_terms(terms: dict, point) -> Fraction:
    pt = [Fraction(x) for x in point]
    total = Fraction(0)
    for ex, c in terms.items():
        val = Fraction(c)
        for x, e in zip(pt, ex):
            if e:
                val *= x**e
        total += val
    return total


def _diff(terms: dict, k: int) -> dict:
    out = {}
    for ex, c in terms.items():
        if ex[k]:
            e = list(ex)
            e[k] -= 1
            out[tuple(e)] = out.get(tuple(e), 0) + c * ex[k]
    return out


# --- sampling --------------------------------------------------------------------------------


def _homogenize(x: Sequence[Fraction]) -> tuple:
    den = lcm(*(Fraction(c).denominator for c in x))
    ints = [int(Fraction(c) * den) for c in x] + [den]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return tuple(c // g for c in ints)


def _random_param(rng: random.Random, height: int) -> tuple:
    while True:
        a, b = rng.randint(-height, height), rng.randint(0, height)
        if (a, b) != (0, 0) and gcd(a, b) == 1:
            return a, b


def projected_sample(surface: ProductSurface, projection: Projection, u, s, v, w) -> tuple:
    """Exact integer homogeneous point of the projected surface at a parameter."""
    den = forms.biform_eval(surface.den, u, s, v, w)
    if den == 0:
        raise PoleError("parameter is a pole of the parametrization")
    nums = [forms.biform_eval(f, u, s, v, w) for f in surface.nums]
    if projection.kind == "central":
        if all(x == 0 for x in nums):
            raise PoleError("point maps to the projection center")
        g = 0
        for c in nums:
            g = gcd(g, c)
        return tuple(c // g for c in nums)
    p = Quaternion(*(Fraction(x, den) for x in nums))
    return _homogenize(stereographic(p, projection.center))


def rational_samples(surface: ProductSurface, projection: Projection | str, count: int, seed: int = 0,
                     height: int = SAMPLE_HEIGHT) -> list[tuple]:
    """Distinct exact sample points from pseudo-random small-height parameters."""
    if isinstance(projection, str):
        projection = Projection.parse(projection)
    rng = random.Random(seed)
    seen = set()
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * count + 1000:
            raise CertificationError("could not draw enough distinct samples")
        (u, s), (v, w) = _random_param(rng, height), _random_param(rng, height)
        try:
            pt = projected_sample(surface, projection, u, s, v, w)
        except (PoleError, ZeroDivisionError):
            continue  # resample
        key = pt if pt[0] >= 0 else tuple(-c for c in pt)
        if projection.kind == "central":
            key = _projective_key(pt)
        if key in seen:
            continue
        seen.add(key)
        out.append(pt)
    return out


def _projective_key(pt) -> tuple:
    lead = next(c for c in pt if c)
    return tuple(c if lead > 0 else -c for c in pt)


def affine_point(pt: Sequence[int]) -> tuple:
    """``(X, Y, Z, T) -> (X/T, Y/T, Z/T)``."""
    return tuple(Fraction(c, pt[3]) for c in pt[:3])


# --- kernels ---------------------------------------------------------------------------------


def evaluation_matrix(points: Sequence[Sequence[int]], basis: MonomialBasis) -> list[list[int]]:
    return [basis.row(p) for p in points]


def vanishing_kernel(points: Sequence[Sequence[int]], basis: MonomialBasis, method: str = "modular",
                     require_rows: bool = True) -> list[ImplicitPoly]:
    """Basis of all polynomials in ``basis`` vanishing at every point.

    ``method="modular"`` eliminates modulo word-size primes and lifts with an
    exact re-check; ``method="bareiss"`` runs fraction-free elimination over Z.
    """
    if require_rows and len(points) < basis.size + EXTRA_ROWS:
        raise ValueError(f"need at least {basis.size + EXTRA_ROWS} points, got {len(points)}")
    mat = evaluation_matrix(points, basis)
    if method == "modular":
        ker = modular_nullspace(mat, basis.size)
    elif method == "bareiss":
        ker = bareiss_nullspace(mat, basis.size)
    else:
        raise ValueError(f"unknown method {method!r}")
    return [ImplicitPoly(basis, tuple(v)) for v in ker]


@dataclass
class DegreeCertificate:
    degree: int
    poly: ImplicitPoly
    kernel_dim: int
    lower_kernel_dims: dict
    samples: int
    fresh_samples: int
    method: str
    homogeneous: bool

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "kernel_dim": self.kernel_dim,
            "lower_kernel_dims": {str(k): v for k, v in self.lower_kernel_dims.items()},
            "samples": self.samples,
            "fresh_samples": self.fresh_samples,
            "method": self.method,
            "poly": self.poly.to_json(),
        }


def basis_for(projection: Projection, degree: int) -> MonomialBasis:
    return MonomialBasis(4, degree, True) if projection.kind == "central" else MonomialBasis(3, degree)


def certify_degree(surface: ProductSurface, projection: Projection | str, d_max: int, seed: int = 0,
                   method: str = "modular", d_min: int = 1) -> DegreeCertificate:
    """Smallest degree ``d <= d_max`` with a nonzero vanishing polynomial.

    Training samples: ``basis.size + 40``.  The returned polynomial is then
    re-checked exactly at 50 fresh samples drawn with a different seed.
    """
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    if isinstance(projection, str):
        projection = Projection.parse(projection)
    pool = rational_samples(surface, projection, basis_for(projection, d_max).size + EXTRA_ROWS, seed)
    lower = {}
    for d in range(d_min, d_max + 1):
        basis = basis_for(projection, d)
        ker = vanishing_kernel(pool[: basis.size + EXTRA_ROWS], basis, method)
        if not ker:
            lower[d] = 0
            continue
        poly = ker[0]
        fresh = rational_samples(surface, projection, FRESH_SAMPLES, seed=_fresh_seed(seed))
        for pt in fresh:
            if _eval_homogeneous(poly, pt) != 0:
                raise CertificationError(f"degree-{d} kernel vector fails at a fresh sample")
        return DegreeCertificate(d, poly, len(ker), lower, basis.size + EXTRA_ROWS, len(fresh), method,
                                 projection.kind == "central")
    raise CertificationError(f"no vanishing polynomial of degree <= {d_max}")


def _fresh_seed(seed: int) -> int:
    return (seed * 1000003 + 7919) % (2**31)


def _eval_homogeneous(poly: ImplicitPoly, pt: Sequence[int]) -> int:
    return sum(c * r for c, r in zip(poly.coeffs, poly.basis.row(pt)))


def vanishes_at(poly: ImplicitPoly, pts) -> bool:
    return all(_eval_homogeneous(poly, p) == 0 for p in pts)


# --- singular locus ----------------------------------------------------------------------------


def curve_points(curve: RationalCircleParam, projection: Projection | str, n_points: int) -> list[tuple]:
    """Distinct exact projected points of a rational circle (homogeneous integers)."""
    if isinstance(projection, str):
        projection = Projection.parse(projection)
    out, seen = [], set()
    k = 0
    while len(out) < n_points:
        k += 1
        # walk the Stern-Brocot-like sequence 0/1, 1/1, -1/1, 1/2, ...
        v, w = _enumerate_rational(k)
        if curve.denominator_at(v, w) == 0:
            continue
        p = curve.point(Fraction(v), Fraction(w))
        try:
            if projection.kind == "central":
                pt = _homogenize_central(tuple(p))
            else:
                pt = _homogenize(stereographic(p, projection.center))
        except PoleError:
            continue
        key = _projective_key(pt)
        if key not in seen:
            seen.add(key)
            out.append(pt)
    return out


def _enumerate_rational(k: int) -> tuple:
    # k = 1, 2, ... -> 0/1, 1/0, 1/1, -1/1, 1/2, -1/2, 2/1, -2/1, 1/3, ...
    if k == 1:
        return 0, 1
    if k == 2:
        return 1, 0
    pairs = []
    n = 1
    while len(pairs) < k:
        for a in range(1, n + 1):
            b = n + 1 - a
            if gcd(a, b) == 1:
                pairs += [(a, b), (-a, b)]
        n += 1
    return pairs[k - 3]


def _homogenize_central(x) -> tuple:
    den = lcm(*(Fraction(c).denominator for c in x))
    ints = [int(Fraction(c) * den) for c in x]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return tuple(c // g for c in ints)


def _gradient_homogeneous(poly: ImplicitPoly, pt: Sequence[int]) -> tuple:
    if poly.basis.homogeneous:
        return poly.gradient(pt)
    return poly.gradient(affine_point(pt))


def gradient_vanishes_on(poly: ImplicitPoly, curve: RationalCircleParam | Sequence, projection="stereo:default",
                         n_points: int = 20) -> bool:
    """True iff every partial derivative vanishes at ``n_points`` exact curve points.

    ``curve`` is a rational circle (projected with ``projection``) or an
    explicit list of integer homogeneous points.  A point off the zero set
    raises :class:`NotOnSurfaceError`.
    """
    pts = curve if not isinstance(curve, RationalCircleParam) else curve_points(curve, projection, n_points)
    for pt in pts:
        if _eval_homogeneous(poly, pt) != 0:
            raise NotOnSurfaceError(f"{pt} is not on the surface")
    return all(all(g == 0 for g in _gradient_homogeneous(poly, pt)) for pt in pts)
