"""Exact binary forms and bi-forms.

A binary form of degree n in (v, w) is stored as the tuple of coefficients
``(c_0, ..., c_n)`` where ``c_k`` multiplies ``v^k w^(n-k)``.  A bi-form of
bidegree (m, n) in ((u, s), (v, w)) is a nested tuple ``C[i][j]``
multiplying ``u^i s^(m-i) v^j w^(n-j)``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence, Tuple

Form = Tuple
BiForm = Tuple[Tuple, ...]


def form_mul(f: Sequence, g: Sequence) -> Form:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return tuple(out)


def form_add(f: Sequence, g: Sequence) -> Form:
    if len(f) != len(g):
        raise ValueError("forms of different degree")
    return tuple(a + b for a, b in zip(f, g))


def form_scale(f: Sequence, c) -> Form:
    return tuple(c * a for a in f)


def form_eval(f: Sequence, v, w):
    n = len(f) - 1
    return sum(c * v**k * w ** (n - k) for k, c in enumerate(f))


def is_zero(f: Sequence) -> bool:
    return all(c == 0 for c in f)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mod(a: list, b: list) -> list:
    a = [Fraction(c) for c in a]
    while len(a) >= len(b) and a:
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        _trim(a)
    return a


def _poly_gcd(a: list, b: list) -> list:
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    while b:
        a, b = b, _poly_mod(a, b)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def infinity_multiplicity(f: Sequence) -> int:
    """Multiplicity of the root (v:w) = (1:0), i.e. the power of w dividing f."""
    n = len(f) - 1
    for k in range(n, -1, -1):
        if f[k] != 0:
            return n - k
    raise ValueError("zero form")


def form_gcd(f: Sequence, g: Sequence) -> Form:
    """Monic-normalized gcd of two binary forms (the zero form is neutral)."""
    if is_zero(f) and is_zero(g):
        raise ValueError("gcd of two zero forms is undefined")
    if is_zero(f):
        return normalize_form(g)
    if is_zero(g):
        return normalize_form(f)
    m = min(infinity_multiplicity(f), infinity_multiplicity(g))
    affine = _poly_gcd(list(f), list(g))
    # re-homogenize: affine part has degree len(affine)-1, then m factors of w
    deg = len(affine) - 1 + m
    out = [Fraction(0)] * (deg + 1)
    for k, c in enumerate(affine):
        out[k] = c
    return normalize_form(tuple(out))


def normalize_form(f: Sequence) -> Form:
    """Scale so the last nonzero coefficient (highest power of v) is 1."""
    for c in reversed(f):
        if c != 0:
            return tuple(Fraction(a) / c for a in f)
    raise ValueError("zero form")


def quadratic_discriminant(f: Sequence):
    """Discriminant ``b^2 - 4ac`` of ``a w^2 + b vw + c v^2`` (order irrelevant)."""
    c0, c1, c2 = f
    return c1 * c1 - 4 * c0 * c2


def real_root_count(f: Sequence) -> Tuple[int, bool]:
    """Distinct real projective roots of a nonzero form of degree <= 2.

    Returns ``(count, has_double_root)``.
    """
    deg = len(f) - 1
    if is_zero(f):
        raise ValueError("zero form has every point as a root")
    if deg == 0:
        return 0, False
    if deg == 1:
        return 1, False
    if deg == 2:
        disc = quadratic_discriminant(f)
        if disc > 0:
            return 2, False
        if disc == 0:
            return 1, True
        return 0, False
    raise ValueError("only forms of degree <= 2 are supported")


def primitive(coeffs: Sequence) -> tuple:
    """Clear denominators and divide by the content; first nonzero entry > 0."""
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g == 0:
        raise ValueError("zero vector")
    ints = [c // g for c in ints]
    for c in ints:
        if c != 0:
            if c < 0:
                ints = [-x for x in ints]
            break
    return tuple(ints)


def biform_outer(f: Sequence, g: Sequence) -> BiForm:
    return tuple(tuple(a * b for b in g) for a in f)


def biform_add(a: BiForm, b: BiForm) -> BiForm:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def biform_scale(a: BiForm, c) -> BiForm:
    return tuple(tuple(c * x for x in row) for row in a)


def biform_mul(a: BiForm, b: BiForm) -> BiForm:
    m = len(a) + len(b) - 1
    n = len(a[0]) + len(b[0]) - 1
    out = [[0] * n for _ in range(m)]
    for i, ra in enumerate(a):
        for j, x in enumerate(ra):
            if x == 0:
                continue
            for k, rb in enumerate(b):
                for l, y in enumerate(rb):
                    out[i + k][j + l] += x * y
    return tuple(tuple(r) for r in out)


def biform_zero(m: int, n: int) -> BiForm:
    return tuple((0,) * (n + 1) for _ in range(m + 1))


def biform_eval(a: BiForm, u, s, v, w):
    m = len(a) - 1
    n = len(a[0]) - 1
    total = 0
    for i, row in enumerate(a):
        left = u**i * s ** (m - i)
        for j, c in enumerate(row):
            if c:
                total += c * left * v**j * w ** (n - j)
    return total


def biform_is_zero(a: BiForm) -> bool:
    return all(c == 0 for row in a for c in row)
