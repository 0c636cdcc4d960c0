import json
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from s3circles.circles import is_great, named_circle, plane_form
from s3circles.classify import left_translate_circle, right_translate_circle
from s3circles.moebius import Projection, inverse_stereographic
from s3circles.polyline import hausdorff_to_circle
from s3circles.product import (LEFT_TIMES_RIGHT, RIGHT_TIMES_LEFT, DegenerateProductError, ProjectionCenterError,
                               build, check_center_off_surface, double_curve, fiber_in_circle, fiber_points,
                               hamilton_array, hyperplane_section, sample_grid, section_polynomial, torus_faces)
from s3circles.quat import I, Quaternion, hamilton_product

F = Fraction
A0 = named_circle("A0")
NORMAL = {b: build(A0, named_circle(b)) for b in ("B1", "B2", "B3")}
params = st.tuples(st.integers(-6, 6), st.integers(1, 6))


def test_on_sphere_identities():
    assert all(s.on_sphere_identity() for s in NORMAL.values())
    assert build(A0, named_circle("C")).on_sphere_identity()


def test_point_examples():
    assert NORMAL["B2"].point(0, 1, 1, 0) == Quaternion(1, 0, 0, 0)
    b = named_circle("B1").point(F(2), F(3))
    assert NORMAL["B1"].point(1, 1, 2, 3) == hamilton_product(I, b)


def test_same_circle_is_rejected():
    with pytest.raises(DegenerateProductError):
        build(named_circle("B1"), named_circle("B1"))


@given(params, params)
def test_sides_swap(p, q):
    (u, s), (v, w) = p, q
    a = build(A0, named_circle("B1"), LEFT_TIMES_RIGHT)
    b = build(named_circle("B1"), A0, RIGHT_TIMES_LEFT)
    assert a.point(u, s, v, w) == b.point(v, w, u, s)


def test_sides_swap_point_sets_on_grid():
    a = build(A0, named_circle("B3"), LEFT_TIMES_RIGHT)
    b = build(named_circle("B3"), A0, RIGHT_TIMES_LEFT)
    pa = np.round(a.grid(16, 16)[2].reshape(-1, 4), 12)
    pb = np.round(b.grid(16, 16)[2].reshape(-1, 4), 12)
    assert sorted(map(tuple, pa)) == sorted(map(tuple, pb))


def test_hamilton_array_matches_exact():
    a, b = Quaternion(F(1, 3), F(2, 3), F(2, 3), 0), Quaternion(0, F(3, 5), 0, F(4, 5))
    ref = [float(c) for c in hamilton_product(a, b)]
    assert np.allclose(hamilton_array(np.array([float(c) for c in a]), np.array([float(c) for c in b])), ref)


def test_jacobian_matches_finite_differences():
    s = NORMAL["B1"]
    al, be = np.array([0.3, 2.0]), np.array([1.1, 4.0])
    _, jac = s.evaluate_with_jacobian(al, be)
    h = 1e-6
    da = (s.evaluate(al + h, be) - s.evaluate(al - h, be)) / (2 * h)
    db = (s.evaluate(al, be + h) - s.evaluate(al, be - h)) / (2 * h)
    assert np.allclose(jac[..., 0], da, atol=1e-8) and np.allclose(jac[..., 1], db, atol=1e-8)


@pytest.mark.parametrize("b", ["B1", "B2", "B3"])
def test_fibers_are_circles(b):
    s = NORMAL[b]
    a = A0.point(F(1), F(2))
    small = plane_form(left_translate_circle(a, named_circle(b)))
    for v, w in [(0, 1), (1, 1), (3, -2), (5, 7), (1, 0)]:
        assert small.contains(tuple(s.point(1, 2, v, w)))
    bb = named_circle(b).point(F(2), F(5))
    great = plane_form(right_translate_circle(A0, bb))
    assert is_great(great)
    for u, t in [(0, 1), (1, 1), (3, -2), (5, 7), (1, 0)]:
        assert great.contains(tuple(s.point(u, t, 2, 5)))


@pytest.mark.parametrize("b", ["B1", "B2", "B3"])
def test_great_fibers_avoid_a0_unless_equal(b):
    s = NORMAL[b]
    t = np.linspace(0, 2 * np.pi, 720, endpoint=False)
    circle = A0.at_angle(t)
    rng = np.random.default_rng(7)
    for beta in rng.uniform(0, 2 * np.pi, 12):
        fiber = s.evaluate(t, np.full_like(t, beta))
        d = np.linalg.norm(fiber[:, None, :] - circle[None, :, :], axis=-1).min()
        assert d > 1e-3
    # the fibers over B meet A0 are A0 itself
    for beta in {"B1": [2 * np.arctan(7**0.5), -2 * np.arctan(7**0.5)], "B2": [np.pi], "B3": []}[b]:
        fiber = s.evaluate(t, np.full_like(t, beta))
        assert np.allclose(fiber[:, 2:], 0, atol=1e-12)


def test_mesh_structure_and_exports():
    m = sample_grid(NORMAL["B1"], 8, 10)
    assert len(m.vertices) == 80 and len(m.faces) == 80
    assert len(m.vertices) - len(m.edges()) + len(m.faces) == 0
    assert np.allclose(m.vertices[0], Projection.parse("stereo:default").apply_array(NORMAL["B1"].evaluate(0.0, 0.0)))
    obj = m.to_obj().splitlines()
    assert sum(line.startswith("v ") for line in obj) == 80
    assert sum(line.startswith("vt ") for line in obj) == 80
    faces = [line for line in obj if line.startswith("f ")]
    idx = [int(tok.split("/")[0]) for line in faces for tok in line.split()[1:]]
    assert min(idx) == 1 and max(idx) == 80
    ply = m.to_ply().splitlines()
    assert ply[0] == "ply" and "element vertex 80" in ply and "end_header" in ply
    js = json.loads(json.dumps(m.to_json()))
    assert js["closed"] and len(js["faces"]) == 80


def test_torus_faces_are_row_major():
    f = torus_faces(3, 4)
    assert f[0].tolist() == [0, 4, 5, 1]
    assert f[-1].tolist() == [11, 3, 0, 8]


def test_sample_grid_preconditions():
    with pytest.raises(ValueError):
        sample_grid(NORMAL["B1"], 4, 16)
    with pytest.raises(ProjectionCenterError):
        sample_grid(build(A0, named_circle("C")), 16, 16)


def test_normal_forms_keep_center_off_surface():
    for s in NORMAL.values():
        assert check_center_off_surface(s, Projection.parse("stereo:default")) > 0.1


def test_clifford_mesh_lies_on_the_torus():
    surface = build(A0, named_circle("C"))
    center = Quaternion(F(3, 5), 0, 0, F(4, 5))
    mesh = sample_grid(surface, 32, 32, "stereo:3/5,0,0,4/5")
    lifted = np.array([[float(c) for c in inverse_stereographic(v.tolist(), center)] for v in mesh.vertices])
    # A0 * C = {(cos a cos b, sin a cos b, cos a sin b, sin a sin b)}: x1 x4 = x2 x3
    assert np.abs(lifted[:, 0] * lifted[:, 3] - lifted[:, 1] * lifted[:, 2]).max() < 1e-9
    assert np.allclose(np.linalg.norm(lifted, axis=1), 1)


def test_double_curve_of_type_one():
    curves = double_curve(NORMAL["B1"])
    assert len(curves) == 1 and curves[0].closed and curves[0].kind == "crossing"
    assert hausdorff_to_circle(curves[0], (0, 0, 0), (0, 0, 1), 1.0) < 1e-6


def test_double_curve_of_type_two_is_a_tangential_edge():
    curves = double_curve(NORMAL["B2"])
    assert len(curves) == 1 and curves[0].kind == "cuspidal"
    assert hausdorff_to_circle(curves[0], (0, 0, 0), (0, 0, 1), 1.0) < 1e-6


def test_double_curve_of_type_three_is_not_real():
    assert double_curve(NORMAL["B3"]) == []


def test_central_double_curve_is_the_line():
    curves = double_curve(NORMAL["B1"], "central")
    assert curves
    for c in curves:
        assert np.abs(c.points[:, 2:]).max() < 1e-6
        assert np.allclose(np.linalg.norm(c.points, axis=1), 1)


def test_hyperplane_section_factorization():
    u, s, v, w = sympy.symbols("u s v w")
    for b, right in [("B1", v**2 - 7 * w**2), ("B2", w**2), ("B3", v**2 + 5 * w**2)]:
        poly = section_polynomial(NORMAL[b], (0, 0, 0, 1)).as_expr()
        ratio = sympy.cancel(poly / ((u - s) * (u + s) * right))
        assert ratio.is_number and ratio != 0
    sec = hyperplane_section(NORMAL["B3"], (0, 0, 0, 1))
    isolated = [c for c in sec.components if c.isolated]
    assert len(isolated) == 1 and isolated[0].kind == "right_fiber"
    sec2 = hyperplane_section(NORMAL["B2"], (0, 0, 0, 1))
    assert [c.multiplicity for c in sec2.components if c.kind == "right_fiber"] == [2]


@pytest.mark.parametrize("b", ["B1", "B2", "B3"])
def test_section_small_circles_are_antipodal(b):
    s = NORMAL[b]
    for v, w in [(0, 1), (1, 1), (2, 3), (-4, 1)]:
        assert s.point(1, 1, v, w) == -s.point(-1, 1, v, w)
    comps = [c for c in hyperplane_section(s, (0, 0, 0, 1)).components if c.kind == "left_fiber"]
    plus, minus = (fiber_points(s, c, 32)[0] for c in sorted(comps, key=lambda c: c.real_roots))
    assert np.allclose(plus, -minus)


def test_fiber_in_circle():
    assert fiber_in_circle(NORMAL["B1"], "v**2 - 7*w**2", plane_form(A0))
    assert fiber_in_circle(NORMAL["B3"], "v**2 + 5*w**2", plane_form(A0))
    assert not fiber_in_circle(NORMAL["B1"], "u - s", plane_form(A0))
