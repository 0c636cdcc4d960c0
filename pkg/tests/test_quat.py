from fractions import Fraction

import pytest
from hypothesis import given

from conftest import rational_quaternions, unit_rational_quaternions
from oracles import sympy_hamilton
from s3circles.quat import (I, J, K, ONE, NotUnitError, PoleError, ProjectivePoint5, Quaternion, UnitQuaternion,
                            conjugate, gamma, gamma_inv, general_inverse, hamilton_product, inverse, is_unit, left_matrix,
                            projectively_equal, right_matrix)


def test_unit_relations():
    assert I * J == K and J * K == I and K * I == J
    assert I * I == J * J == K * K == -ONE
    assert I * J * K == -ONE


@given(rational_quaternions(), rational_quaternions())
def test_product_matches_sympy(a, b):
    assert tuple(hamilton_product(Quaternion(*a), Quaternion(*b))) == sympy_hamilton(a, b)


@given(rational_quaternions(), rational_quaternions())
def test_norm_is_multiplicative(a, b):
    a, b = Quaternion(*a), Quaternion(*b)
    assert (a * b).norm2() == a.norm2() * b.norm2()


@given(rational_quaternions(), rational_quaternions())
def test_left_and_right_matrices(a, b):
    a, b = Quaternion(*a), Quaternion(*b)
    prod = tuple(a * b)
    assert tuple(sum(m * x for m, x in zip(row, b)) for row in left_matrix(a)) == prod
    assert tuple(sum(m * x for m, x in zip(row, a)) for row in right_matrix(b)) == prod


@given(rational_quaternions())
def test_general_inverse(a):
    a = Quaternion(*a)
    assert a * general_inverse(a) == ONE
    assert conjugate(conjugate(a)) == a


@given(unit_rational_quaternions())
def test_unit_inverse_is_conjugate(a):
    assert inverse(a) == conjugate(a)
    with pytest.raises(NotUnitError):
        inverse(2 * a)


@given(unit_rational_quaternions())
def test_unit_quaternions_from_projection_are_exact(q):
    assert is_unit(q)
    UnitQuaternion.from_quaternion(q)


def test_unit_quaternion_rejects_non_unit():
    with pytest.raises(NotUnitError):
        UnitQuaternion(Fraction(1), Fraction(1))


@given(rational_quaternions())
def test_gamma_round_trip(a):
    q = Quaternion(*a)
    assert gamma(gamma_inv(q)) == q
    p = gamma_inv(q)
    assert p.on_moebius_quadric() == (q.norm2() == 1)


def test_gamma_pole_and_projective_equality():
    with pytest.raises(PoleError):
        gamma(ProjectivePoint5(0, 1, 0, 0, 0))
    assert ProjectivePoint5(1, 2, 3, 4, 5) == ProjectivePoint5(2, 4, 6, 8, 10)
    assert not projectively_equal((1, 2), (1, 3))
    with pytest.raises(ValueError):
        ProjectivePoint5(0, 0, 0, 0, 0)
