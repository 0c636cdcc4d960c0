from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import small_fractions, unit_rational_quaternions
from s3circles.circles import named_circle
from s3circles.moebius import (LEFT_FAMILY_FIXED_BY, GaussQ, NotOnAbsoluteError, Projection, apply_to_line,
                               central_projection, classify_generator, fit_circle_3d, generator_line,
                               inverse_stereographic, inversion, left_translation, on_absolute, right_translation,
                               same_line, stereographic, stereographic_array)
from s3circles.quat import ONE, I, PoleError, ProjectivePoint5, Quaternion, hamilton_product, is_unit

F = Fraction
gauss = st.builds(GaussQ, small_fractions, small_fractions)


def test_stereographic_examples():
    assert stereographic(Quaternion(F(1), 0, 0, 0)) == (1, 0, 0)
    assert stereographic(Quaternion(0, 0, 0, F(-1))) == (0, 0, 0)
    with pytest.raises(PoleError):
        stereographic(Quaternion(0, 0, 0, F(1)))
    pts = stereographic_array(named_circle("A0").at_angle(np.linspace(0, 6, 50)))
    assert np.allclose(np.linalg.norm(pts, axis=1), 1) and np.allclose(pts[:, 2], 0)


def test_inverse_stereographic_examples():
    assert inverse_stereographic([0, 0, 0]) == Quaternion(0, 0, 0, -1)
    assert inverse_stereographic([1, 0, 0]) == Quaternion(1, 0, 0, 0)
    assert inverse_stereographic([F(1, 2), 0, 0]) == Quaternion(F(4, 5), 0, 0, F(-3, 5))


@given(st.lists(small_fractions, min_size=3, max_size=3))
def test_stereographic_round_trip(x):
    q = inverse_stereographic(x)
    assert is_unit(q)
    assert stereographic(q) == tuple(x)


@given(st.lists(small_fractions, min_size=3, max_size=3), unit_rational_quaternions())
def test_round_trip_with_moved_center(x, center):
    q = inverse_stereographic(x, center)
    assert is_unit(q)
    if q != center:
        assert stereographic(q, center) == tuple(x)


def test_moved_center_is_the_pole():
    c = Quaternion(F(3, 5), 0, F(4, 5), 0)
    with pytest.raises(PoleError):
        stereographic(c, c)
    assert Projection.parse("stereo:3/5,0,4/5,0").apply(Quaternion(F(1), 0, 0, 0)) == (0, -2, 0)


def test_inversion():
    f = inversion((0, 0, 0), 1)
    assert f((2, 0, 0)) == (F(1, 2), 0, 0)
    c, r = (F(1), F(2), F(-1)), F(3)
    g = inversion(c, r)
    x = (F(1), F(2), F(2))  # on the sphere
    assert g(x) == x
    y = (F(4), F(-1), F(5, 3))
    d1 = sum((a - b) ** 2 for a, b in zip(c, y))
    d2 = sum((a - b) ** 2 for a, b in zip(c, g(y)))
    assert d1 * d2 == r**4
    assert g(g(y)) == y
    with pytest.raises(PoleError):
        g(c)


def test_inversion_maps_circles_to_circles():
    t = np.linspace(0, 2 * np.pi, 12, endpoint=False)
    circle = np.c_[3 + np.cos(t), np.sin(t), 0 * t]
    f = inversion((0.5, 0.2, 0.7), 1.3)
    assert fit_circle_3d(np.array([f(p) for p in circle])) < 1e-10


@given(unit_rational_quaternions())
def test_stereographic_image_of_translated_circle_is_circle(a):
    pts = np.array([[float(c) for c in hamilton_product(a, Quaternion(*p))]
                    for p in named_circle("B3").at_angle(np.linspace(0, 6, 10))])
    if np.max(pts[:, 3]) > 1 - 1e-6:
        return
    assert fit_circle_3d(stereographic_array(pts)) < 1e-10


def test_central_projection():
    assert central_projection(ProjectivePoint5(1, 0, 1, 0, 0)) == (0, 1, 0, 0)
    assert Projection.parse("central").apply(Quaternion(1, 0, 0, 0)) == (1, 0, 0, 0)
    with pytest.raises(PoleError):
        central_projection(ProjectivePoint5(1, 0, 0, 0, 0))
    # antipodal points give the same projective point
    a, b = central_projection(Quaternion(3, 4, 0, 0)), central_projection(Quaternion(-3, -4, 0, 0))
    assert ProjectivePoint5(1, *a) == ProjectivePoint5(1, *(-y for y in b))
    assert tuple(-y for y in b) == a


def test_translation_examples():
    assert left_translation(ONE) == left_translation(ONE).compose(left_translation(ONE))
    m = left_translation(I)
    assert m.elliptic
    assert ProjectivePoint5(m.apply(ProjectivePoint5(1, 1, 0, 0, 0))) == ProjectivePoint5(1, 0, 1, 0, 0)


@given(unit_rational_quaternions(), unit_rational_quaternions())
def test_translations_compose_and_stay_elliptic(a, b):
    la, lb = left_translation(a), left_translation(b)
    assert la.elliptic and right_translation(b).elliptic
    assert la.compose(lb) == left_translation(hamilton_product(a, b))


@given(unit_rational_quaternions(), unit_rational_quaternions())
def test_isoclinic_law(a, x):
    ax = hamilton_product(a, x)
    assert sum(p * q for p, q in zip(x, ax)) == a.w


@given(gauss)
def test_generator_lines_lie_on_absolute(mu):
    for family in ("left", "right"):
        line = generator_line(family, mu)
        assert on_absolute(line.p) and on_absolute(line.q)
        assert classify_generator(line) == family


@given(unit_rational_quaternions(), gauss)
def test_translations_preserve_ruling_families(a, mu):
    for maker in (left_translation, right_translation):
        for family in ("left", "right"):
            image = apply_to_line(maker(a), generator_line(family, mu))
            assert classify_generator(image) == family


@given(unit_rational_quaternions(), gauss)
def test_left_family_calibration(a, mu):
    # the recorded calibration: left translations fix every left generator individually
    line = generator_line(LEFT_FAMILY_FIXED_BY, mu)
    assert same_line(line, apply_to_line(left_translation(a), line))


def test_non_generator_is_rejected():
    with pytest.raises(NotOnAbsoluteError):
        classify_generator(((0, 1, 0, 0, 0), (0, 0, 1, 0, 0)))


def test_projection_parse():
    assert str(Projection.parse("stereo:default")) == "stereo:default"
    assert Projection.parse("central").homogeneous
    for bad in ("stereo:1,1,0,0", "stereo:1,2", "cylindrical"):
        with pytest.raises(ValueError):
            Projection.parse(bad)
