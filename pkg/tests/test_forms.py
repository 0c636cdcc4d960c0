from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from s3circles import forms

v, w = sympy.symbols("v w")
coeff = st.integers(-9, 9)


def to_expr(f):
    n = len(f) - 1
    return sum(c * v**k * w ** (n - k) for k, c in enumerate(f))


@given(st.lists(coeff, min_size=1, max_size=4), st.lists(coeff, min_size=1, max_size=4))
def test_product_matches_sympy(f, g):
    assert sympy.expand(to_expr(forms.form_mul(f, g)) - to_expr(f) * to_expr(g)) == 0


@given(st.lists(coeff, min_size=3, max_size=3).filter(any))
def test_real_root_count_matches_sympy(f):
    count, double = forms.real_root_count(tuple(f))
    expr = to_expr(f)
    roots = set(sympy.real_roots(sympy.Poly(expr.subs(w, 1), v))) if sympy.Poly(expr.subs(w, 1), v).degree() > 0 else set()
    at_infinity = f[2] == 0
    assert count == len(roots) + int(at_infinity)
    assert double == (forms.quadratic_discriminant(f) == 0)


@given(st.lists(coeff, min_size=3, max_size=3).filter(any), st.lists(coeff, min_size=3, max_size=3).filter(any))
def test_gcd_divides_both(f, g):
    h = forms.form_gcd(f, g)
    ref = sympy.gcd(to_expr(f), to_expr(g))
    assert sympy.Poly(to_expr(h), v, w).total_degree() == sympy.Poly(ref, v, w).total_degree()


def test_primitive():
    assert forms.primitive([Fraction(-2, 3), 4, 0]) == (1, -6, 0)
    with pytest.raises(ValueError):
        forms.primitive([0, 0])


def test_biform_eval():
    a = forms.biform_outer((1, 2), (0, 0, 3))  # (s + 2u) * 3 v^2
    assert forms.biform_eval(a, 1, 1, 2, 5) == 3 * 3 * 4
    assert forms.biform_is_zero(forms.biform_zero(2, 2))
