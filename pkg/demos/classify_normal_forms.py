"""Classify A0 * B for the three small circles, then again after moving B by a random unit quaternion."""
import random
from fractions import Fraction

from s3circles import classify, named_circle
from s3circles.classify import right_translate_circle
from s3circles.moebius import inverse_stereographic

A0 = named_circle("A0")
rng = random.Random(1)

for name in ("B1", "B2", "B3"):
    b = named_circle(name)
    c = classify(A0, b)
    x = inverse_stereographic([Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(3)])
    moved = classify(A0, right_translate_circle(b, x))
    print(f"A0*{name}: type {c.type}  pair form {[str(f) for f in c.pair_form]}  moved: type {moved.type}")
