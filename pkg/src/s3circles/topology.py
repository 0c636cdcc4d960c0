"""Numerical topology certificates for projected product surfaces.

All results here are floating-point certificates with explicit tolerances:
linking numbers from the Gauss double sum over polygon segment pairs,
separation margins from grid search plus local refinement, and the
decomposition of a type I surface into two tori meeting along a circle.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from .circles import RationalCircleParam, is_great, meet_great_circle, plane_form
from .moebius import Projection
from .polyline import PolylineCurve, curve_distance, hausdorff
from .product import Mesh, ProductSurface, hamilton_array, sample_grid

DEFAULT_SEGMENTS = 256
RESIDUE_LIMIT = 0.1
MIN_CURVE_GAP = 1e-6


class CurvesTooCloseError(ValueError):
    """Curves nearly touch; refine the polylines before computing linking."""


class ClassifierDisagreementError(ValueError):
    """The surface is not of the type the certificate applies to."""


class OpenMeshError(ValueError):
    """Euler characteristic requested for a mesh with boundary."""


# --- linking numbers ---------------------------------------------------------------------------


def _gauss_sum(c1: PolylineCurve, c2: PolylineCurve) -> float:
    """Sum of signed solid angles of segment pairs over 4 pi (exact for polygons)."""
    p0, p1 = c1.segments()
    q0, q1 = c2.segments()
    r13 = q0[None, :, :] - p0[:, None, :]
    r14 = q1[None, :, :] - p0[:, None, :]
    r23 = q0[None, :, :] - p1[:, None, :]
    r24 = q1[None, :, :] - p1[:, None, :]

    def unit_cross(a, b):
        c = np.cross(a, b)
        n = np.linalg.norm(c, axis=-1, keepdims=True)
        return np.divide(c, n, out=np.zeros_like(c), where=n > 0)

    n1, n2 = unit_cross(r13, r14), unit_cross(r14, r24)
    n3, n4 = unit_cross(r24, r23), unit_cross(r23, r13)

    def asin_dot(a, b):
        return np.arcsin(np.clip(np.einsum("...k,...k->...", a, b), -1.0, 1.0))

    omega = asin_dot(n1, n2) + asin_dot(n2, n3) + asin_dot(n3, n4) + asin_dot(n4, n1)
    r12 = (p1 - p0)[:, None, :]
    r34 = (q1 - q0)[None, :, :]
    sign = np.sign(np.einsum("ijk,ijk->ij", np.cross(r34, r12), r13))
    return float(np.sum(omega * sign) / (4 * np.pi))


def min_distance(c1: PolylineCurve, c2: PolylineCurve) -> float:
    return float(min(curve_distance(c1.points, c2).min(), curve_distance(c2.points, c1).min()))


@dataclass(frozen=True)
class LinkingResult:
    value: int
    raw: float
    residue: float
    segments: int

    def __int__(self):
        return self.value


def linking_number(c1: PolylineCurve, c2: PolylineCurve, segments: int = DEFAULT_SEGMENTS,
                   max_segments: int = 4096, detail: bool = False):
    """Linking number of two closed polylines by the Gauss double sum.

    Each curve is resampled to ``segments`` segments; the count doubles until
    the distance of the sum to the nearest integer drops below 0.1.
    """
    if not (c1.closed and c2.closed):
        raise ValueError("linking numbers need closed curves")
    gap = min_distance(c1, c2)
    if gap <= MIN_CURVE_GAP:
        raise CurvesTooCloseError(f"curves are {gap:.2e} apart; refine them first")
    n = segments
    while True:
        a = c1 if len(c1) <= n else c1.resampled(n)
        b = c2 if len(c2) <= n else c2.resampled(n)
        raw = _gauss_sum(a, b)
        residue = abs(raw - round(raw))
        if residue < RESIDUE_LIMIT or n >= max_segments:
            break
        n *= 2
    if residue >= RESIDUE_LIMIT:
        raise CurvesTooCloseError(f"Gauss sum residue {residue:.3f} did not converge")
    res = LinkingResult(int(round(raw)), raw, residue, n)
    return res if detail else res.value


# --- cores, separation ---------------------------------------------------------------------------


def _project(surface_pts: np.ndarray, projection: Projection) -> np.ndarray:
    if projection.kind != "stereo":
        raise ValueError("topology checks need a stereographic projection into R^3")
    return projection.apply_array(surface_pts)


def _as_projection(p) -> Projection:
    return Projection.parse(p) if isinstance(p, str) else p


def _polygon_centroid(loop: np.ndarray) -> tuple[np.ndarray, float]:
    """Arc-length weighted centroid of a closed polygon and its max radius about it."""
    nxt = np.roll(loop, -1, axis=0)
    lengths = np.linalg.norm(nxt - loop, axis=-1)
    mids = 0.5 * (loop + nxt)
    c = (lengths[..., None] * mids).sum(axis=-2) / lengths.sum(axis=-1)[..., None]
    radius = np.linalg.norm(loop - c[..., None, :], axis=-1).max(axis=-1)
    return c, radius


def torus_core(surface: ProductSurface, projection="stereo:default", nu: int = 128, nv: int = 128) -> PolylineCurve:
    """Closed curve of centroids of the projected small-circle fibers {a(u)} * B."""
    projection = _as_projection(projection)
    _, _, pts = surface.grid(nu, nv)
    loops = _project(pts.reshape(-1, 4), projection).reshape(nu, nv, 3)
    centers, radii = _polygon_centroid(loops)
    if np.any(radii < 1e-6):
        raise ValueError("degenerate fiber: projected circle has radius below 1e-6")
    return PolylineCurve(centers, True, "torus_core")


def projected_circle(circle: RationalCircleParam, projection="stereo:default", n: int = 512) -> PolylineCurve:
    projection = _as_projection(projection)
    t = 2 * np.pi * np.arange(n) / n
    return PolylineCurve(_project(circle.at_angle(t), projection), True, circle.name)


def separation(surface: ProductSurface, projection, curve: PolylineCurve, nu: int = 128, nv: int = 128,
               refine: int = 8) -> float:
    """Minimum distance from the projected surface to a curve.

    Grid minimum first, then Nelder-Mead from the ``refine`` best grid points
    on the true surface-to-polyline distance.
    """
    projection = _as_projection(projection)
    alpha, beta, pts = surface.grid(nu, nv)
    proj = _project(pts.reshape(-1, 4), projection)
    d = curve_distance(proj, curve)
    best = float(d.min())
    order = np.argsort(d)[:refine]

    def dist(p):
        x = _project(surface.evaluate(p[0], p[1])[None], projection)
        return float(curve_distance(x, curve)[0])

    for k in order:
        i, j = divmod(int(k), nv)
        res = minimize(dist, (alpha[i], beta[j]), method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
        best = min(best, float(res.fun))
    return best


def euler_characteristic(mesh: Mesh) -> int:
    """V - E + F of a closed mesh; every edge must border exactly two faces."""
    incidence = Counter()
    for f in mesh.faces:
        for k in range(len(f)):
            a, b = int(f[k]), int(f[(k + 1) % len(f)])
            incidence[min(a, b), max(a, b)] += 1
    if not mesh.closed or any(n != 2 for n in incidence.values()):
        raise OpenMeshError("mesh has boundary")
    used = np.unique(np.asarray(mesh.faces).ravel())
    return int(len(used) - len(incidence) + len(mesh.faces))


# --- reports ---------------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    value: object

    def to_json(self) -> dict:
        return {"name": self.name, "pass": bool(self.passed), "value": _jsonable(self.value)}


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


@dataclass
class TopologyReport:
    type: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, value) -> None:
        self.checks.append(Check(name, bool(passed), value))

    def to_json(self) -> dict:
        return {"type": self.type, "checks": [c.to_json() for c in self.checks]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# --- Hopf structure of A * B with A a one-parameter subgroup -------------------------------------


def _subgroup_direction(great: RationalCircleParam) -> np.ndarray:
    """Unit imaginary direction p of a great circle through 1 (so A = {cos t + p sin t})."""
    pts = great.at_angle(np.array([0.0, 1.0, 2.0]))
    one = np.array([1.0, 0, 0, 0])
    if np.min(np.linalg.norm(great.at_angle(np.linspace(0, 2 * np.pi, 720)) - one, axis=1)) > 1e-9:
        if np.linalg.norm(great.at_angle(np.array([0.0]))[0] - one) > 1e-12:
            raise ValueError("left factor must be a great circle through 1 (normal position)")
    im = pts[:, 1:]
    k = int(np.argmax(np.linalg.norm(im, axis=1)))
    p = im[k] / np.linalg.norm(im[k])
    return np.concatenate([[0.0], p])


def hopf_map(x: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``conj(x) p x``, constant on the cosets {exp(p t) x}."""
    xc = x * np.array([1, -1, -1, -1])
    return hamilton_array(hamilton_array(xc, p), x)[..., 1:]


def hopf_fiber(p: np.ndarray, target: np.ndarray, n: int = 512) -> np.ndarray:
    """Points of the fiber over ``target`` (a unit vector of R^3)."""
    c = np.concatenate([[0.0], target / np.linalg.norm(target)])
    y = np.array([1.0, 0, 0, 0]) - hamilton_array(p, c)
    y /= np.linalg.norm(y)
    t = 2 * np.pi * np.arange(n) / n
    g = np.cos(t)[:, None] * np.array([1.0, 0, 0, 0]) + np.sin(t)[:, None] * p
    return hamilton_array(g, y)


def _lobe_centroid(loop: np.ndarray) -> np.ndarray:
    c, _ = _polygon_centroid(loop)
    return c / np.linalg.norm(c)


def touching_tori_certificate(surface: ProductSurface, projection="stereo:default", n: int = 256,
                              contact_tol: float = 1e-3) -> TopologyReport:
    """Certify the type I picture: two tori meeting only along the projected double circle.

    The small circle B meets the great circle A (in normal position, A a
    one-parameter subgroup) at two parameters t1, t2.  The parameter torus
    splits at t1, t2 into two annuli T, T'.  Checked: both boundary circles
    of each annulus project onto pi(A); sheets of T and T' come together
    only near pi(A); Hopf-fiber cores over points inside the two lobes of
    the Hopf image of B are linked once.
    """
    projection = _as_projection(projection)
    great, small = surface.left, surface.right
    if surface.side != "left_times_right":
        raise ClassifierDisagreementError("certificate expects the product great * small")
    gplane = plane_form(great)
    if not is_great(gplane):
        raise ClassifierDisagreementError("left factor is not a great circle")
    if is_great(plane_form(small)):
        raise ClassifierDisagreementError("right factor is a great circle: Clifford torus, not type I")
    meet = meet_great_circle(small, gplane)
    if meet.q != 2:
        raise ClassifierDisagreementError(f"not applicable: q = {meet.q} (type I needs q = 2)")
    betas = sorted(2 * np.arctan2(float(v), float(w)) % (2 * np.pi) for v, w in meet.roots)
    b1, b2 = betas
    report = TopologyReport("I")
    circle = projected_circle(great, projection, 2048)

    # (i) boundary circles of both annuli project onto pi(A)
    t = 2 * np.pi * np.arange(n) / n
    worst = 0.0
    for beta in (b1, b2):
        bd = PolylineCurve(_project(surface.evaluate(t, np.full_like(t, beta)), projection), True)
        worst = max(worst, hausdorff(bd, circle))
    report.add("boundary_circles_on_double_circle", worst < contact_tol, worst)

    # (ii) interiors meet only near pi(A)
    inset = 2 * np.pi / n
    s1 = np.linspace(b1 + inset, b2 - inset, n // 2)
    s2 = np.linspace(b2 + inset, b1 + 2 * np.pi - inset, n // 2)
    T = _project(surface.evaluate(t[:, None], s1[None, :]).reshape(-1, 4), projection)
    Tp = _project(surface.evaluate(t[:, None], s2[None, :]).reshape(-1, 4), projection)
    d, _ = cKDTree(Tp).query(T)
    spacing = max(np.linalg.norm(np.diff(T.reshape(n, -1, 3), axis=1), axis=-1).max(),
                  np.linalg.norm(np.diff(T.reshape(n, -1, 3), axis=0), axis=-1).max())
    close = d < 2 * spacing
    near_dist = float(curve_distance(T[close], circle).max()) if close.any() else 0.0
    contacts = _refine_contacts(surface, projection, t, s1, s2, close.reshape(n, -1), (b1, b2))
    contact_dist = float(curve_distance(contacts, circle).max()) if len(contacts) else 0.0
    report.add("contacts_on_double_circle", contact_dist < contact_tol, contact_dist)
    far = curve_distance(T, circle) > 10 * spacing
    margin = float(d[far].min()) if far.any() else float("nan")
    report.add("interior_margin_away_from_double_circle", margin > 0, margin)
    report.add("near_contact_band_width", True, near_dist)

    # (iii) cores are linked
    p = _subgroup_direction(great)
    fine = np.linspace(b1, b2, 400)
    lobe1 = hopf_map(small.at_angle(fine), p)
    fine2 = np.linspace(b2, b1 + 2 * np.pi, 400)
    lobe2 = hopf_map(small.at_angle(fine2), p)
    c1, c2 = _lobe_centroid(lobe1), _lobe_centroid(lobe2)
    core1 = PolylineCurve(_project(hopf_fiber(p, c1), projection), True, "core_T")
    core2 = PolylineCurve(_project(hopf_fiber(p, c2), projection), True, "core_T'")
    lk = linking_number(core1, core2, detail=True)
    report.add("cores_linked", abs(lk.value) == 1, lk.value)
    report.add("gauss_residue", lk.residue < RESIDUE_LIMIT, lk.residue)
    mesh_gap = min(float(curve_distance(T, core1).min()), float(curve_distance(Tp, core2).min()))
    report.add("cores_off_surface", mesh_gap > 0, mesh_gap)
    return report


def _refine_contacts(surface, projection, t, s1, s2, close, split) -> np.ndarray:
    """Polish near-contact pairs between the two annuli into true common points."""
    idx = np.argwhere(close)
    if len(idx) == 0:
        return np.zeros((0, 3))
    take = idx[:: max(1, len(idx) // 64)]
    out = []
    b1, b2 = split
    for i, j in take:
        x0 = _project(surface.evaluate(t[i], s1[j])[None], projection)[0]
        T2 = _project(surface.evaluate(t[:, None], s2[None, :]).reshape(-1, 4), projection)
        k = int(np.argmin(np.linalg.norm(T2 - x0, axis=1)))
        ki, kj = divmod(k, len(s2))

        def f(p):
            a = _project(surface.evaluate(p[0], p[1])[None], projection)[0]
            b = _project(surface.evaluate(p[2], p[3])[None], projection)[0]
            return float(np.sum((a - b) ** 2))

        res = minimize(f, (t[i], s1[j], t[ki], s2[kj]), method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 8000})
        if res.fun < 1e-16:
            out.append(_project(surface.evaluate(res.x[0], res.x[1])[None], projection)[0])
    return np.array(out).reshape(-1, 3)


def type_three_checks(surface: ProductSurface, projection="stereo:default",
                      resolutions=(64, 128, 256)) -> TopologyReport:
    """Isolated double circle: positive separation, linking with the torus core, Euler 0."""
    projection = _as_projection(projection)
    report = TopologyReport("III")
    circle = projected_circle(surface.left, projection, 2048)
    margins = [separation(surface, projection, circle, n, n) for n in resolutions]
    report.add("separation_margins", all(m > 1e-6 for m in margins), margins)
    spread = (max(margins) - min(margins)) / max(margins)
    report.add("separation_stable_under_refinement", spread < 0.05, spread)
    core = torus_core(surface, projection)
    lk = linking_number(circle, core, detail=True)
    report.add("linking_with_torus_core", abs(lk.value) == 1, lk.value)
    report.add("gauss_residue", lk.residue < RESIDUE_LIMIT, lk.residue)
    chi = euler_characteristic(sample_grid(surface, 64, 64, projection))
    report.add("euler_characteristic", chi == 0, chi)
    return report


def type_two_checks(surface: ProductSurface, projection="stereo:default") -> TopologyReport:
    """Tangential contact: pi(A) lies on the surface and B touches A in one point."""
    projection = _as_projection(projection)
    report = TopologyReport("II")
    meet = meet_great_circle(surface.right, plane_form(surface.left))
    report.add("tangent_single_contact", meet.q == 1 and meet.tangent, [meet.q, meet.tangent])
    circle = projected_circle(surface.left, projection, 2048)
    sep = separation(surface, projection, circle)
    report.add("double_circle_on_surface", sep < 1e-6, sep)
    chi = euler_characteristic(sample_grid(surface, 64, 64, projection))
    report.add("euler_characteristic", chi == 0, chi)
    return report
