import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from s3circles.contours import torus_contours

N = 64
T = np.arange(N) * 2 * np.pi / N
A, B = np.meshgrid(T, T, indexing="ij")


def test_constant_function_has_no_contours():
    assert torus_contours(np.ones((N, N))) == []


@given(st.floats(0.5, 1.5), st.floats(2.5, 3.5), st.floats(2.5, 3.5))
def test_interior_circle(radius, ca, cb):
    loops = torus_contours((A - ca) ** 2 + (B - cb) ** 2 - radius**2)
    assert len(loops) == 1
    loop = loops[0]
    assert np.array_equal(loop[0], loop[-1])
    # linear interpolation of a quadratic: error bounded by the cell size squared
    assert np.abs(np.hypot(loop[:, 0] - ca, loop[:, 1] - cb) - radius).max() < (2 * np.pi / N) ** 2


def test_meridian_loops_unwrap_by_one_period():
    loops = torus_contours(np.cos(A))
    assert len(loops) == 2
    for loop in loops:
        assert np.allclose(loop[:, 0], loop[0, 0])
        assert loop[-1, 1] - loop[0, 1] == pytest.approx(2 * np.pi)
    assert sorted(loop[0, 0] for loop in loops) == pytest.approx([np.pi / 2, 3 * np.pi / 2])


def test_diagonal_loops_have_slope_minus_one():
    loops = torus_contours(np.cos(A + B))
    assert len(loops) == 2
    for loop in loops:
        shift = loop[-1] - loop[0]
        assert np.allclose(np.abs(shift), 2 * np.pi)
        assert shift[0] == pytest.approx(-shift[1])
        assert np.abs(np.cos(loop.sum(axis=1))).max() < 0.01


def test_periods_scale_coordinates():
    loops = torus_contours(np.cos(A), periods=(1.0, 2.0))
    assert sorted(loop[0, 0] for loop in loops) == pytest.approx([0.25, 0.75])
    assert loops[0][-1, 1] - loops[0][0, 1] == pytest.approx(2.0)
