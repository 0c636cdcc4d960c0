"""The verification battery behind ``s3circles verify``.

Each check is tagged with the module and operation it exercises and with
its kind: ``exact`` checks run in rational arithmetic, ``float`` checks are
numerical certificates with a stated tolerance.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import circles, lattice, moebius, topology
from .circles import RationalCircleParam, meet_great_circle, named_circle, on_sphere_certificate, plane_form
from .classify import classify
from .implicit import certify_degree, gradient_vanishes_on
from .polyline import hausdorff_to_circle
from .product import build, double_curve, hyperplane_section
from .quat import Quaternion, hamilton_product

KINDS = ("exact", "float")
NORMAL_FORMS = ("B1", "B2", "B3")
EXPECTED_MEET = {"B1": (2, False), "B2": (1, True), "B3": (0, False)}
EXPECTED_TYPE = {"B1": "I", "B2": "II", "B3": "III"}
OFF_SURFACE_CENTER = "stereo:3/5,0,0,4/5"
# restricted to a line, a cubic partial with more than three zeros is identically zero
LINE_POINTS = [(a, b, 0, 0) for a, b in ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (3, -1), (1, 3))]


@dataclass
class Result:
    module: str
    op: str
    name: str
    kind: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"module": self.module, "op": self.op, "name": self.name, "kind": self.kind,
                "pass": self.passed, "detail": self.detail}


def corrupted(name: str) -> RationalCircleParam:
    """A preset with its first numerator coefficient bumped by one."""
    c = named_circle(name)
    first = (c.nums[0][0] + 1,) + tuple(c.nums[0][1:])
    return RationalCircleParam((first,) + c.nums[1:], c.den, name)


def random_unit_quaternion(rng: random.Random, height: int = 20) -> Quaternion:
    x = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(3)]
    return moebius.inverse_stereographic(x)


def _checks(circ: dict, seed: int):
    """Yield (module, op, name, kind, thunk); a thunk returns (passed, detail)."""
    A0 = circ["A0"]

    for name in ("A0", *NORMAL_FORMS, "C"):
        yield "circles", "on_sphere_certificate", name, "exact", lambda c=circ[name]: (on_sphere_certificate(c), "")

    for b in NORMAL_FORMS:
        def product_identity(b=b):
            return build(A0, circ[b]).on_sphere_identity(), ""
        yield "product_surface", "on_sphere_identity", f"A0*{b}", "exact", product_identity

        def meet(b=b):
            m = meet_great_circle(circ[b], plane_form(A0))
            return (m.q, m.tangent) == EXPECTED_MEET[b], f"q={m.q} tangent={m.tangent}"
        yield "circles", "meet_great_circle", f"{b} vs A0", "exact", meet

        def cls(b=b):
            t = classify(A0, circ[b]).type
            return t == EXPECTED_TYPE[b], f"type {t}"
        yield "classify", "classify", f"A0*{b}", "exact", cls

    for b in NORMAL_FORMS:
        def octic(b=b):
            cert = certify_degree(build(A0, circ[b]), "stereo:default", 8, seed=seed, d_min=7)
            ok = cert.degree == 8 and cert.kernel_dim == 1 and cert.lower_kernel_dims.get(7) == 0
            ok = ok and gradient_vanishes_on(cert.poly, A0, "stereo:default", 20)
            return ok, f"degree {cert.degree}, kernel {cert.kernel_dim}"
        yield "implicit", "certify_degree", f"stereo A0*{b}", "exact", octic

        def quartic(b=b):
            cert = certify_degree(build(A0, circ[b]), "central", 4, seed=seed)
            line = LINE_POINTS
            ok = cert.degree == 4 and cert.kernel_dim == 1
            ok = ok and gradient_vanishes_on(cert.poly, line, "central")
            return ok, f"degree {cert.degree}, kernel {cert.kernel_dim}"
        yield "implicit", "certify_degree", f"central A0*{b}", "exact", quartic

        def section(b=b):
            sec = hyperplane_section(build(A0, circ[b]), (0, 0, 0, 1))
            left = sorted(r for c in sec.components if c.kind == "left_fiber" for r in c.real_roots)
            right = [c for c in sec.components if c.kind == "right_fiber"]
            q = len({r for c in right for r in c.real_roots})
            ok = left == [-1.0, 1.0] and q == EXPECTED_MEET[b][0]
            return ok, f"left roots {left}, right real roots {q}"
        yield "product_surface", "hyperplane_section", f"A0*{b} x4=0", "exact", section

    def clifford():
        cert = certify_degree(build(A0, circ["C"]), OFF_SURFACE_CENTER, 4, seed=seed)
        return cert.degree == 4 and cert.kernel_dim == 1, f"degree {cert.degree}"
    yield "implicit", "certify_degree", "Clifford torus A0*C", "exact", clifford

    def chains():
        cs = lattice.consistency_chains()
        g = lattice.sectional_genus_report()
        ok = all(c.holds for c in cs) and g["sectional_genus"] == 1
        ok = ok and lattice.delta_S3(8, -8) == 8 and lattice.delta_P3(4, -6) == 3
        return ok, "; ".join(map(str, cs))
    yield "lattice", "consistency_chains", "delta chains", "exact", chains

    def isoclinic():
        rng = random.Random(seed)
        for _ in range(100):
            a, x = random_unit_quaternion(rng), random_unit_quaternion(rng)
            ax = hamilton_product(a, x)
            if sum(p * q for p, q in zip(x, ax)) != a[0]:
                return False, "inner product differs from Re(a)"
        return True, "100 samples"
    yield "moebius", "left_translation", "isoclinic law", "exact", isoclinic

    def rulings():
        rng = random.Random(seed + 1)
        for _ in range(20):
            a = random_unit_quaternion(rng)
            for maker in (moebius.left_translation, moebius.right_translation):
                m = maker(a)
                for fam in ("left", "right"):
                    mu = moebius.GaussQ(Fraction(rng.randint(-9, 9), rng.randint(1, 9)), rng.randint(-9, 9))
                    img = moebius.apply_to_line(m, moebius.generator_line(fam, mu))
                    if moebius.classify_generator(img) != fam:
                        return False, f"{maker.__name__} moved a {fam} generator"
        return True, "20 translations of each side"
    yield "moebius", "apply_to_line", "ruling preservation", "exact", rulings

    def circle_fit():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(20):
            a = random_unit_quaternion(random.Random(int(rng.integers(1 << 30))))
            pts = np.array([[float(c) for c in hamilton_product(a, Quaternion(*p))]
                            for p in named_circle("B1").at_angle(np.linspace(0, 6, 12))])
            worst = max(worst, moebius.fit_circle_3d(moebius.stereographic_array(pts)))
        return worst < 1e-10, f"max residual {worst:.2e}"
    yield "moebius", "stereographic", "circle to circle", "float", circle_fit

    def type_three():
        r = topology.type_three_checks(build(A0, circ["B3"]))
        return r.passed, ", ".join(f"{c.name}={c.passed}" for c in r.checks)
    yield "topology", "type_three_checks", "A0*B3", "float", type_three

    def type_one():
        r = topology.touching_tori_certificate(build(A0, circ["B1"]))
        return r.passed, ", ".join(f"{c.name}={c.passed}" for c in r.checks)
    yield "topology", "touching_tori_certificate", "A0*B1", "float", type_one

    def double():
        curves = double_curve(build(A0, circ["B1"]))
        if len(curves) != 1:
            return False, f"{len(curves)} curves"
        d = hausdorff_to_circle(curves[0], (0, 0, 0), (0, 0, 1), 1.0)
        return d < 1e-6, f"Hausdorff {d:.2e}"
    yield "product_surface", "double_curve", "A0*B1", "float", double


def run(skip=(), corrupt: str | None = None, seed: int = 0, progress=None) -> dict:
    """Run the battery; returns the JSON report."""
    skip = tuple(skip)
    bad = [k for k in skip if k not in KINDS]
    if bad:
        raise ValueError(f"unknown check kind(s) {bad}; choose from {KINDS}")
    circ = {name: named_circle(name) for name in circles.PRESETS}
    if corrupt is not None:
        if corrupt not in circ:
            raise ValueError(f"unknown preset {corrupt!r}")
        circ[corrupt] = corrupted(corrupt)
    results = []
    for module, op, name, kind, thunk in _checks(circ, seed):
        if kind in skip:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = thunk()
        except Exception as e:  # noqa: BLE001 - every failure is reported, none aborts the battery
            ok, detail = False, f"{type(e).__name__}: {e}"
        results.append(Result(module, op, name, kind, bool(ok), detail))
        if progress:
            progress(results[-1], time.perf_counter() - t0)
    return {
        "partial": bool(skip),
        "skipped": sorted(skip),
        "passed": all(r.passed for r in results),
        "checks": [r.to_json() for r in results],
    }
