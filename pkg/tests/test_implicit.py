from fractions import Fraction
from math import comb

import numpy as np
import pytest
import sympy

from s3circles.circles import named_circle
from s3circles.classify import left_translate_circle
from s3circles.implicit import (EXTRA_ROWS, ImplicitPoly, MonomialBasis, NotOnSurfaceError, CertificationError,
                                certify_degree, curve_points, gradient_vanishes_on, rational_samples,
                                vanishing_kernel)
from s3circles.moebius import Projection
from s3circles.product import build

from oracles import sympy_kernel_dim

A0 = named_circle("A0")
SURFACES = {b: build(A0, named_circle(b)) for b in ("B1", "B2", "B3")}


@pytest.fixture(scope="module")
def octics():
    return {b: certify_degree(s, "stereo:default", 8, d_min=7) for b, s in SURFACES.items()}


@pytest.fixture(scope="module")
def quartics():
    return {b: certify_degree(s, "central", 4) for b, s in SURFACES.items()}


@pytest.mark.parametrize("d", range(0, 9))
def test_basis_size(d):
    assert MonomialBasis(3, d).size == comb(d + 3, 3) == len(MonomialBasis(3, d).exponents)
    assert len(MonomialBasis(4, d, True).exponents) == comb(d + 3, 3)


def test_basis_is_graded_lex():
    assert MonomialBasis(3, 2).exponents == [
        (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1),
        (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    with pytest.raises(ValueError):
        MonomialBasis(4, 2)


def _sphere_points(n):
    out = []
    for a in range(-6, 7):
        for b in range(1, 8):
            q = a * a + b * b
            out.append((2 * a, 2 * b, q - 1, q + 1))
    return out[:n]


def test_unit_sphere_kernel():
    basis = MonomialBasis(3, 2)
    ker = vanishing_kernel(_sphere_points(basis.size + EXTRA_ROWS), basis)
    assert len(ker) == 1
    x, y, z = sympy.symbols("x y z")
    assert sympy.expand(ker[0].to_sympy() + (x**2 + y**2 + z**2 - 1)) == 0


def test_unit_sphere_has_no_linear_equation():
    basis = MonomialBasis(3, 1)
    assert vanishing_kernel(_sphere_points(basis.size + EXTRA_ROWS), basis) == []


def test_kernel_needs_enough_rows():
    with pytest.raises(ValueError):
        vanishing_kernel(_sphere_points(10), MonomialBasis(3, 2))


def test_bareiss_and_modular_agree_on_sphere():
    basis = MonomialBasis(3, 2)
    pts = _sphere_points(basis.size + EXTRA_ROWS)
    assert vanishing_kernel(pts, basis, "modular") == vanishing_kernel(pts, basis, "bareiss")


def test_kernel_dimension_against_sympy():
    basis = MonomialBasis(4, 3, True)
    pts = rational_samples(SURFACES["B2"], "central", basis.size + EXTRA_ROWS)
    rows = [basis.row(p) for p in pts]
    assert len(vanishing_kernel(pts, basis)) == sympy_kernel_dim(rows) == 0


def test_samples_are_seed_deterministic():
    a = rational_samples(SURFACES["B1"], "stereo:default", 30, seed=3)
    assert a == rational_samples(SURFACES["B1"], "stereo:default", 30, seed=3)
    assert a != rational_samples(SURFACES["B1"], "stereo:default", 30, seed=4)
    assert len(set(a)) == 30


@pytest.mark.parametrize("b", ["B1", "B2", "B3"])
def test_octic_certificate(octics, b):
    cert = octics[b]
    assert (cert.degree, cert.kernel_dim, cert.lower_kernel_dims) == (8, 1, {7: 0})
    assert gradient_vanishes_on(cert.poly, A0, "stereo:default", 20)


@pytest.mark.parametrize("b", ["B1", "B2", "B3"])
def test_octic_vanishes_in_floating_point(octics, b):
    poly = octics[b].poly
    rng = np.random.default_rng(11)
    al, be = rng.uniform(0, 2 * np.pi, (2, 1000))
    pts = Projection.parse("stereo:default").apply_array(SURFACES[b].evaluate(al, be))
    keep = np.linalg.norm(pts, axis=1) < 50
    pts = pts[keep]
    ex = np.array(poly.basis.exponents)
    scale = np.abs(np.prod(pts[:, None, :] ** ex[None], axis=2)) @ np.abs(np.array(poly.coeffs, float))
    assert np.max(np.abs(poly.evaluate_float(pts)) / scale) < 1e-8


@pytest.mark.parametrize("b", ["B1", "B2", "B3"])
def test_central_quartic(quartics, b):
    cert = quartics[b]
    assert (cert.degree, cert.kernel_dim) == (4, 1)
    assert cert.poly.basis.homogeneous
    line = [(a, c, 0, 0) for a, c in ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1))]
    assert gradient_vanishes_on(cert.poly, line, "central")


def test_central_samples_are_distinct_projective_points():
    pts = rational_samples(SURFACES["B1"], "central", 200)
    assert all(any(p) for p in pts)
    keys = {p if next(c for c in p if c) > 0 else tuple(-c for c in p) for p in pts}
    assert len(keys) == 200


def test_certified_polynomial_is_seed_invariant(octics):
    other = certify_degree(SURFACES["B3"], "stereo:default", 8, seed=5, d_min=8)
    assert other.poly == octics["B3"].poly


def test_modular_and_bareiss_agree_on_quartic(quartics):
    bareiss = certify_degree(SURFACES["B1"], "central", 4, method="bareiss")
    assert bareiss.poly == quartics["B1"].poly


def test_generic_small_circle_is_not_singular(octics):
    small = left_translate_circle(A0.point(Fraction(1), Fraction(2)), named_circle("B1"))
    assert not gradient_vanishes_on(octics["B1"].poly, small, "stereo:default", 10)


def test_point_off_surface_raises(octics):
    with pytest.raises(NotOnSurfaceError):
        gradient_vanishes_on(octics["B1"].poly, [(1, 2, 3, 1)], "stereo:default")


def test_degree_too_small_fails():
    with pytest.raises(CertificationError):
        certify_degree(SURFACES["B1"], "stereo:default", 3)
    with pytest.raises(ValueError):
        certify_degree(SURFACES["B1"], "stereo:default", 0)


def test_json_round_trip(quartics):
    poly = quartics["B2"].poly
    assert ImplicitPoly.from_json(poly.to_json()) == poly


def test_curve_points_are_distinct():
    pts = curve_points(A0, "stereo:default", 20)
    assert len(set(pts)) == 20 and all(p[2] == 0 for p in pts)


def test_clifford_torus_is_quartic():
    cert = certify_degree(build(A0, named_circle("C")), "stereo:3/5,0,0,4/5", 4)
    assert (cert.degree, cert.kernel_dim, cert.lower_kernel_dims) == (4, 1, {1: 0, 2: 0, 3: 0})
