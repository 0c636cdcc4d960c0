"""Type of the product surface great * small from its double pairs.

Write the great circle as A = a G with G a one-parameter subgroup.  Two
parameters t, t' of the small circle B give the same point of G * B exactly
when N(t') conj(N(t)) lies in the plane of G, where N is the numerator of
B.  Pairing with the two normals of that plane gives two antisymmetric
bi-forms; after dividing out the diagonal they become symmetric bilinear
forms, i.e. two linear conditions on the binary quadratic whose roots are
the pair.  Its real roots are the points where B meets the double circle:
two for type I, one (tangent) for type II, none for type III.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import forms
from .circles import Circle, RationalCircleParam, is_great, meet_great_circle, plane_form
from .linalg import nullspace
from .quat import Quaternion, conjugate, hamilton_product, is_exact, left_matrix
from .product import LEFT_TIMES_RIGHT, RIGHT_TIMES_LEFT

TYPES = {2: "I", 1: "II", 0: "III"}


class ClassificationError(ValueError):
    """Inputs outside the great * small setting or in a degenerate position."""


class CliffordTorusError(ClassificationError):
    """Both circles are great: the product is a Clifford torus (a quartic)."""


class BothSmallError(ClassificationError):
    """Both circles are small; this classifier does not cover that case."""


class DegeneratePairError(ClassificationError):
    """Every pair of parameters is a double pair, or the pair conditions vanish."""


@dataclass(frozen=True)
class Classification:
    type: str
    q: int
    tangent: bool
    pair_form: tuple
    double_circle: Circle
    translation: Quaternion
    q_against_factor: int

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "q": self.q,
            "tangent": self.tangent,
            "pair_form": [str(c) for c in self.pair_form],
            "double_circle": {"n1": [str(c) for c in self.double_circle.n1],
                              "n2": [str(c) for c in self.double_circle.n2]},
            "translation": [str(c) for c in self.translation],
            "q_against_translated_factor": self.q_against_factor,
        }


def conjugate_circle(c: RationalCircleParam) -> RationalCircleParam:
    nums = (c.nums[0],) + tuple(forms.form_scale(f, -1) for f in c.nums[1:])
    return RationalCircleParam(nums, c.den, c.name + "~" if c.name else "")


def left_translate_circle(a: Quaternion, c: RationalCircleParam) -> RationalCircleParam:
    m = left_matrix(a)
    nums = []
    for row in m:
        f = (0, 0, 0)
        for coef, num in zip(row, c.nums):
            f = forms.form_add(f, forms.form_scale(num, coef))
        nums.append(f)
    return RationalCircleParam(tuple(nums), c.den, c.name)


def right_translate_circle(c: RationalCircleParam, b: Quaternion) -> RationalCircleParam:
    return conjugate_circle(left_translate_circle(conjugate(b), conjugate_circle(c)))


def _rational_point(c: RationalCircleParam) -> Quaternion:
    for v, w in ((0, 1), (1, 0), (1, 1), (1, 2)):
        if c.denominator_at(v, w) != 0:
            return c.point(Fraction(v), Fraction(w))
    raise ClassificationError("no rational sample point")


def _plane_of(l1, l2) -> Circle:
    """Great circle cut out by two independent linear forms (orthogonalized)."""
    d11 = sum(x * x for x in l1)
    d12 = sum(x * y for x, y in zip(l1, l2))
    n2 = [y - d12 / d11 * x for x, y in zip(l1, l2)]
    return Circle(tuple(forms.primitive(l1)), tuple(forms.primitive(n2)))


def _biform_of_product(b: RationalCircleParam, normal) -> tuple:
    """``<normal, N(t') conj(N(t))>`` as a 3x3 bi-form (t' first, t second)."""
    out = forms.biform_zero(2, 2)
    basis = [Quaternion(*(int(i == k) for i in range(4))) for k in range(4)]
    for p, fp in enumerate(b.nums):
        for r, fr in enumerate(b.nums):
            prod = hamilton_product(basis[p], conjugate(basis[r]))
            coef = sum(nc * pc for nc, pc in zip(normal, prod))
            if coef:
                out = forms.biform_add(out, forms.biform_scale(forms.biform_outer(fp, fr), coef))
    return out


_DIAGONAL = ((0, 1), (-1, 0))  # v w' - w v' with t' first: [i][j] ~ v'^i w'^(1-i) v^j w^(1-j)


def _divide_diagonal(m) -> tuple:
    """Solve ``m = S * (v w' - w v')`` for the (1,1) bi-form S, exactly."""
    cols = []
    for i in range(2):
        for j in range(2):
            e = tuple(tuple(int((a, c) == (i, j)) for c in range(2)) for a in range(2))
            prod = forms.biform_mul(e, _DIAGONAL)
            cols.append([prod[a][c] for a in range(3) for c in range(3)])
    target = [m[a][c] for a in range(3) for c in range(3)]
    rows = [[cols[k][r] for k in range(4)] + [-target[r]] for r in range(9)]
    ker = [v for v in nullspace(rows, 5) if v[4] != 0]
    if len(ker) != 1:
        raise DegeneratePairError("pair bi-form is not divisible by the diagonal")
    v = [x / ker[0][4] for x in ker[0][:4]]
    s = ((v[0], v[1]), (v[2], v[3]))
    if s[0][1] != s[1][0]:
        raise DegeneratePairError("quotient by the diagonal is not symmetric")
    return s


def _pair_functional(s) -> tuple:
    """Linear functional on (f0, f1, f2) whose zeros are quadratics with roots a double pair."""
    return (s[1][1], -s[0][1], s[0][0])


def _cross(a, b) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def double_pair_form(great: RationalCircleParam, small: RationalCircleParam):
    """The binary quadratic cutting out the double pair on ``small``, plus translation data."""
    a = _rational_point(great)
    subgroup = left_translate_circle(conjugate(a), great)
    gp = plane_form(subgroup)
    if not is_great(gp):
        raise ClassificationError("translated great circle is not a subgroup")
    functionals = [_pair_functional(_divide_diagonal(_biform_of_product(small, n))) for n in (gp.n1, gp.n2)]
    f = _cross(*functionals)
    if all(c == 0 for c in f):
        raise DegeneratePairError("pair conditions are dependent: infinitely many double pairs")
    return tuple(Fraction(c) for c in f), a, subgroup, gp


def _double_circle(small: RationalCircleParam, f, a: Quaternion) -> Circle:
    """Great circle through the double pair (V' in G * B), moved by ``a`` to A * B."""
    rows = [[small.nums[k][i] for k in range(4)] + [-f[i]] for i in range(3)]
    ker = nullspace(rows, 5)
    if len(ker) != 2:
        raise DegeneratePairError("double circle is not determined by the pair")
    l1, l2 = (v[:4] for v in ker)
    v_prime = _plane_of(l1, l2)
    # l . x = 0 on V'  <=>  (l applied to conj(a) y) = 0 on V = a V'
    m = left_matrix(conjugate(a))
    moved = [[sum(l[r] * m[r][c] for r in range(4)) for c in range(4)] for l in (v_prime.n1, v_prime.n2)]
    return v_prime, _plane_of(*moved)


def classify(great: RationalCircleParam, small: RationalCircleParam, side: str = LEFT_TIMES_RIGHT) -> Classification:
    """Type I, II or III of the product of a great circle and a small circle.

    ``side`` is the ordering of the product; ``right_times_left`` means
    small * great, handled by quaternion conjugation.
    """
    if side not in (LEFT_TIMES_RIGHT, RIGHT_TIMES_LEFT):
        raise ValueError(f"unknown side {side!r}")
    for c in (great, small):
        if not all(is_exact(x) for f in (*c.nums, c.den) for x in f):
            raise ClassificationError("classification needs exact rational circles")
    g_great = is_great(plane_form(great))
    s_great = is_great(plane_form(small))
    if g_great and s_great:
        raise CliffordTorusError("both circles are great: Clifford torus of degree 4")
    if not g_great and not s_great:
        raise BothSmallError("both circles are small; not classified")
    if not g_great:
        raise ClassificationError("the first circle must be the great one")
    if side == RIGHT_TIMES_LEFT:
        great, small = conjugate_circle(great), conjugate_circle(small)
    f, a, subgroup, gp = double_pair_form(great, small)
    q, tangent = forms.real_root_count(f)
    v_prime, v = _double_circle(small, f, a)
    check = meet_great_circle(small, v_prime)
    if (check.q, check.tangent) != (q, tangent):
        raise ClassificationError("double circle meeting disagrees with the pair form")
    if q == 1 and not tangent:
        raise ClassificationError("single transversal meeting point: not a valid configuration")
    naive = meet_great_circle(small, gp).q
    if side == RIGHT_TIMES_LEFT:
        v = Circle(tuple(v.n1[:1]) + tuple(-x for x in v.n1[1:]), tuple(v.n2[:1]) + tuple(-x for x in v.n2[1:]))
    return Classification(TYPES[q], q, tangent, f, v, a, naive)
