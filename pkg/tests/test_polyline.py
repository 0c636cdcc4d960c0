import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from s3circles.polyline import (PolylineCurve, curve_distance, curves_to_json, distance_to_circle, hausdorff,
                                hausdorff_to_circle)


def ngon(n, radius=1.0, phase=0.0):
    t = phase + 2 * np.pi * np.arange(n) / n
    return PolylineCurve(np.stack([radius * np.cos(t), radius * np.sin(t), 0 * t], axis=1))


def test_validation():
    with pytest.raises(ValueError):
        PolylineCurve(np.zeros((1, 3)))
    with pytest.raises(ValueError):
        PolylineCurve(np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0.0]]), closed=False)
    with pytest.raises(ValueError):
        PolylineCurve(np.eye(3))
    assert len(PolylineCurve(np.eye(3), closed=False).segments()[0]) == 2


def test_closed_segments_wrap():
    a, b = ngon(8).segments()
    assert len(a) == 8 and np.allclose(b[-1], a[0])


def test_json_round_trip():
    c = ngon(12)
    back = PolylineCurve.from_json(json.loads(json.dumps(c.to_json())))
    assert np.array_equal(back.points, c.points) and back.closed
    assert len(json.loads(curves_to_json([c, c]))) == 2


def test_distance_to_circle():
    pts = np.array([[0, 0, 0], [2, 0, 0], [1, 0, 1], [0, 0.5, 0]], float)
    assert np.allclose(distance_to_circle(pts, (0, 0, 0), (0, 0, 1), 1.0), [1, 1, 1, 0.5])


def test_hausdorff_between_polygons():
    a, b = ngon(16), ngon(16, radius=1.5)
    assert hausdorff(a, b) == pytest.approx(0.5, abs=1e-12)
    assert hausdorff(a, a) == 0


def test_curve_distance_to_square_edges():
    sq = PolylineCurve(np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0.5], [0.25, 0.5], [0.25, 0.25], [0, 0.2]],
                                float))
    assert curve_distance(np.array([[0.5, -0.3]]), sq)[0] == pytest.approx(0.3)


@given(st.integers(8, 4000), st.floats(0, 1))
def test_circle_bound_is_sagitta_for_inscribed_polygon(n, phase):
    # the true distance is attained at chord midpoints: 1 - cos(pi / n)
    c = ngon(n, phase=phase)
    bound = hausdorff_to_circle(c, (0, 0, 0), (0, 0, 1), 1.0)
    true = 1 - np.cos(np.pi / n)
    assert true - 1e-12 <= bound <= true + 1e-12


def test_circle_bound_catches_radial_offset():
    c = ngon(4096, radius=1 + 1e-5)
    bound = hausdorff_to_circle(c, (0, 0, 0), (0, 0, 1), 1.0)
    assert 1e-5 <= bound < 1e-5 + 1e-6


def test_circle_bound_rejects_partial_arc():
    t = np.linspace(0, np.pi, 400)
    arc = PolylineCurve(np.stack([np.cos(t), np.sin(t), 0 * t], axis=1), closed=False)
    assert hausdorff_to_circle(arc, (0, 0, 0), (0, 0, 1), 1.0) == np.inf


def test_circle_bound_tilted_plane():
    rng = np.random.default_rng(2)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    c = ngon(1000)
    moved = PolylineCurve(c.points @ q.T + [1, 2, 3])
    normal = q @ [0, 0, 1]
    assert hausdorff_to_circle(moved, (1, 2, 3), normal, 1.0) == pytest.approx(1 - np.cos(np.pi / 1000), abs=1e-12)


def test_resampled_keeps_shape():
    c = ngon(64).resampled(256)
    assert len(c) == 256
    assert np.allclose(np.linalg.norm(c.points[:, :2], axis=1)[::4], 1)
    assert np.allclose(ngon(8).reversed().points[0], ngon(8).points[-1])
