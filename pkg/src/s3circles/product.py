"""Product surfaces ``A * B = {a * b}`` of two circles on S^3.

The surface is the image of the parameter torus under
``sigma(u:s, v:w) = a(u:s) * b(v:w)`` (or ``b * a``).  Every coordinate is
a bi-form of bidegree (2, 2) over a common denominator, so exact points are
available at rational parameters and the on-sphere property is a polynomial
identity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from . import forms
from .circles import RationalCircleParam, plane_form, _sample_params
from .contours import torus_contours
from .moebius import Projection, stereographic_array
from .polyline import PolylineCurve
from .quat import Quaternion, hamilton_product

LEFT_TIMES_RIGHT = "left_times_right"
RIGHT_TIMES_LEFT = "right_times_left"
SIDES = (LEFT_TIMES_RIGHT, RIGHT_TIMES_LEFT)


class DegenerateProductError(ValueError):
    """Both factors trace the same circle."""


class ProjectionCenterError(ValueError):
    """The projection center lies on the surface."""


_BASIS = [Quaternion(*(int(i == k) for i in range(4))) for k in range(4)]
# STRUCTURE[k][l] = (sign, m) with e_k * e_l = sign * e_m
STRUCTURE = []
for _ek in _BASIS:
    _row = []
    for _el in _BASIS:
        _p = tuple(hamilton_product(_ek, _el))
        _m = next(i for i, c in enumerate(_p) if c)
        _row.append((_p[_m], _m))
    STRUCTURE.append(_row)


def hamilton_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting Hamilton product of float arrays with trailing axis 4."""
    a0, a1, a2, a3 = np.moveaxis(np.asarray(a, float), -1, 0)
    b0, b1, b2, b3 = np.moveaxis(np.asarray(b, float), -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def _torus_gap(x, y):
    d = np.abs(np.asarray(x) - np.asarray(y)) % (2 * np.pi)
    return np.minimum(d, 2 * np.pi - d)


@dataclass(frozen=True, eq=False)
class ProductSurface:
    """``sigma(u:s, v:w)`` with ``(u:s)`` on ``left`` and ``(v:w)`` on ``right``.

    ``side`` chooses the order of the factors in the product: ``left * right``
    or ``right * left``.
    """

    left: RationalCircleParam
    right: RationalCircleParam
    side: str = LEFT_TIMES_RIGHT
    nums: tuple = field(init=False, repr=False)
    den: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}")
        nums = [forms.biform_zero(2, 2) for _ in range(4)]
        for k in range(4):
            for l in range(4):
                if self.side == LEFT_TIMES_RIGHT:
                    sign, m = STRUCTURE[k][l]
                else:
                    sign, m = STRUCTURE[l][k]
                term = forms.biform_outer(self.left.nums[k], self.right.nums[l])
                nums[m] = forms.biform_add(nums[m], forms.biform_scale(term, sign))
        object.__setattr__(self, "nums", tuple(nums))
        object.__setattr__(self, "den", forms.biform_outer(self.left.den, self.right.den))

    @property
    def name(self) -> str:
        a, b = self.left.name or "A", self.right.name or "B"
        return f"{a}*{b}" if self.side == LEFT_TIMES_RIGHT else f"{b}*{a}"

    def on_sphere_identity(self) -> bool:
        total = forms.biform_zero(4, 4)
        for f in self.nums:
            total = forms.biform_add(total, forms.biform_mul(f, f))
        return total == forms.biform_mul(self.den, self.den)

    def point(self, u, s, v, w) -> Quaternion:
        """Exact point at rational projective parameters (float for float input)."""
        d = forms.biform_eval(self.den, u, s, v, w)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes")
        vals = [forms.biform_eval(f, u, s, v, w) for f in self.nums]
        if all(isinstance(x, (int, Fraction)) for x in (u, s, v, w)):
            return Quaternion(*(Fraction(x) / d for x in vals))
        return Quaternion(*(float(x) / float(d) for x in vals))

    def factor_points(self, alpha, beta) -> tuple[np.ndarray, np.ndarray]:
        return self.left.at_angle(alpha), self.right.at_angle(beta)

    def evaluate(self, alpha, beta) -> np.ndarray:
        """Float points at angle parameters (broadcasting)."""
        a, b = self.factor_points(alpha, beta)
        return hamilton_array(a, b) if self.side == LEFT_TIMES_RIGHT else hamilton_array(b, a)

    def grid(self, nu: int, nv: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Angles and points on the regular nu x nv grid (row-major in u)."""
        alpha = 2 * np.pi * np.arange(nu) / nu
        beta = 2 * np.pi * np.arange(nv) / nv
        pts = self.evaluate(alpha[:, None], beta[None, :])
        return alpha, beta, pts

    def evaluate_with_jacobian(self, alpha, beta) -> tuple[np.ndarray, np.ndarray]:
        """Points and the (..., 4, 2) Jacobian with respect to the two angles."""
        a, da = self.left.at_angle_with_derivative(alpha)
        b, db = self.right.at_angle_with_derivative(beta)
        if self.side == LEFT_TIMES_RIGHT:
            pt, ja, jb = hamilton_array(a, b), hamilton_array(da, b), hamilton_array(a, db)
        else:
            pt, ja, jb = hamilton_array(b, a), hamilton_array(b, da), hamilton_array(db, a)
        return pt, np.stack(np.broadcast_arrays(ja, jb), axis=-1)

    def jacobian(self, alpha, beta) -> np.ndarray:
        return self.evaluate_with_jacobian(alpha, beta)[1]


def _same_circle(a: RationalCircleParam, b: RationalCircleParam) -> bool:
    pa = plane_form(a)
    for v, w in _sample_params():
        if b.denominator_at(v, w) == 0:
            continue
        if not pa.contains(tuple(b.point(Fraction(v), Fraction(w)))):
            return False
    return True


def build(a: RationalCircleParam, b: RationalCircleParam, side: str = LEFT_TIMES_RIGHT) -> ProductSurface:
    """Build the product surface and verify it lies on S^3 exactly."""
    if _same_circle(a, b):
        raise DegenerateProductError("factors are the same circle; the product is not a surface")
    surf = ProductSurface(a, b, side)
    if not surf.on_sphere_identity():
        raise ValueError("product fails the on-sphere identity; inputs are not circles on S^3")
    return surf


# --- meshes ------------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Mesh:
    vertices: np.ndarray  # (nu*nv, 3) or (nu*nv, 4), row-major over (u, v)
    faces: np.ndarray  # (F, 4) vertex indices
    params: np.ndarray  # (nu*nv, 2) angles
    closed: bool = True

    def edges(self) -> set:
        out = set()
        for f in self.faces:
            for k in range(len(f)):
                a, b = int(f[k]), int(f[(k + 1) % len(f)])
                out.add((min(a, b), max(a, b)))
        return out

    def to_obj(self) -> str:
        lines = ["# quad mesh, vertices row-major over the parameter grid"]
        lines += ["v " + " ".join(f"{c:.12g}" for c in v) for v in self.vertices]
        lines += ["vt " + " ".join(f"{c:.12g}" for c in p) for p in self.params]
        lines += ["f " + " ".join(f"{i + 1}/{i + 1}" for i in f) for f in self.faces]
        return "\n".join(lines) + "\n"

    def to_ply(self) -> str:
        dim = self.vertices.shape[1]
        names = "xyzw"[:dim]
        head = ["ply", "format ascii 1.0", f"element vertex {len(self.vertices)}"]
        head += [f"property double {c}" for c in names]
        head += ["property double u", "property double v"]
        head += [f"element face {len(self.faces)}", "property list uchar int vertex_indices", "end_header"]
        body = [" ".join(f"{c:.12g}" for c in (*v, *p)) for v, p in zip(self.vertices, self.params)]
        body += [f"{len(f)} " + " ".join(str(int(i)) for i in f) for f in self.faces]
        return "\n".join(head + body) + "\n"

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices.tolist(),
            "faces": self.faces.tolist(),
            "params": self.params.tolist(),
            "closed": self.closed,
        }


def torus_faces(nu: int, nv: int) -> np.ndarray:
    i, j = np.meshgrid(np.arange(nu), np.arange(nv), indexing="ij")
    i, j = i.ravel(), j.ravel()
    i1, j1 = (i + 1) % nu, (j + 1) % nv
    return np.stack([i * nv + j, i1 * nv + j, i1 * nv + j1, i * nv + j1], axis=1)


def _rational_grid_params(n: int) -> list:
    """Grid indices whose half-angle tangent is rational, with their (v:w)."""
    quarter = {0: (0, 1), 1: (1, 1), 2: (1, 0), 3: (-1, 1)}
    return [(q * n // 4, vw) for q, vw in quarter.items() if (q * n) % 4 == 0]


def check_center_off_surface(surface: ProductSurface, projection: Projection, nu: int = 64, nv: int = 64,
                             tol: float = 1e-6) -> float:
    """Raise if the stereographic center lies on the surface; return its distance."""
    if projection.kind != "stereo":
        return math.inf
    c = projection.center
    if c.exact:
        for i, (u, s) in _rational_grid_params(nu):
            for j, (v, w) in _rational_grid_params(nv):
                if forms.biform_eval(surface.den, u, s, v, w) != 0 and surface.point(u, s, v, w) == c:
                    raise ProjectionCenterError("projection center is a grid point of the surface")
    cf = np.array(tuple(c), float)
    _, _, pts = surface.grid(nu, nv)
    d = np.linalg.norm(pts - cf, axis=-1)
    i, j = np.unravel_index(np.argmin(d), d.shape)
    x0 = (2 * np.pi * i / nu, 2 * np.pi * j / nv)
    res = minimize(lambda p: np.sum((surface.evaluate(p[0], p[1]) - cf) ** 2), x0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 4000})
    dist = float(min(d.min(), math.sqrt(max(res.fun, 0.0))))
    if dist < tol:
        raise ProjectionCenterError(f"projection center is within {dist:.2e} of the surface")
    return dist


def sample_grid(surface: ProductSurface, nu: int, nv: int, projection: Projection | str = "stereo:default") -> Mesh:
    """Closed quad mesh of the projected surface over a regular parameter grid."""
    if nu < 8 or nv < 8:
        raise ValueError("need nu, nv >= 8")
    if isinstance(projection, str):
        projection = Projection.parse(projection)
    check_center_off_surface(surface, projection)
    alpha, beta, pts = surface.grid(nu, nv)
    verts = projection.apply_array(pts.reshape(-1, 4))
    params = np.stack(np.meshgrid(alpha, beta, indexing="ij"), axis=-1).reshape(-1, 2)
    return Mesh(verts, torus_faces(nu, nv), params, True)


# --- double curve ------------------------------------------------------------------------------


@dataclass
class _Branch:
    """Refined double points along one curve, with a batch refinement callback."""

    params: np.ndarray
    points: np.ndarray
    refine: object
    closed: bool
    kind: str


def _collision_refiner(surface: ProductSurface, sign: float, tol: float, sep_min: float):
    """Batched Gauss-Newton (minimum-norm steps) on ``sigma(p1) - sign sigma(p2) = 0``."""

    def refine(guess: np.ndarray):
        p = np.array(guess, float).reshape(-1, 4)
        for _ in range(30):
            x1, j1 = surface.evaluate_with_jacobian(p[:, 0], p[:, 1])
            x2, j2 = surface.evaluate_with_jacobian(p[:, 2], p[:, 3])
            f = x1 - sign * x2
            jac = np.concatenate([j1, -sign * j2], axis=-1)
            step = -np.einsum("mij,mj->mi", np.linalg.pinv(jac, rcond=1e-10), f)
            p = p + step
            if np.abs(step).max() < 1e-15:
                break
        f = surface.evaluate(p[:, 0], p[:, 1]) - sign * surface.evaluate(p[:, 2], p[:, 3])
        ga, gb = _torus_gap(p[:, 0], p[:, 2]), _torus_gap(p[:, 1], p[:, 3])
        # antipodal pairs sharing one parameter are the trivial identification of tau
        gap = np.maximum(ga, gb) if sign > 0 else np.minimum(ga, gb)
        ok = (np.linalg.norm(f, axis=1) < tol) & (gap >= sep_min)
        return p, ok

    refine.sign = sign
    return refine


_GOLDEN = (np.sqrt(5) - 1) / 2


def _critical_refiner(surface: ProductSurface, tol: float, axis: int, width: float):
    """Batched golden-section search for rank drops of the Jacobian along one angle."""

    def smin(t, fixed):
        p = (t, fixed) if axis == 0 else (fixed, t)
        return np.linalg.svd(surface.jacobian(*p), compute_uv=False)[..., -1]

    def refine(guess: np.ndarray):
        g = np.array(guess, float).reshape(-1, 4)
        fixed, t0 = g[:, 1 - axis], g[:, axis]
        lo, hi = t0 - width, t0 + width
        c, d = hi - _GOLDEN * (hi - lo), lo + _GOLDEN * (hi - lo)
        fc, fd = smin(c, fixed), smin(d, fixed)
        for _ in range(80):
            left = fc < fd
            hi = np.where(left, d, hi)
            lo = np.where(left, lo, c)
            c_new = np.where(left, hi - _GOLDEN * (hi - lo), d)
            d_new = np.where(left, c, lo + _GOLDEN * (hi - lo))
            c, d = c_new, d_new
            fc, fd = smin(c, fixed), smin(d, fixed)
        t = 0.5 * (lo + hi)
        val = smin(t, fixed)
        p = np.zeros((len(g), 4))
        p[:, axis], p[:, 1 - axis] = t, fixed
        p[:, 2:] = p[:, :2]
        return p, val < tol

    refine.sign = 1.0
    return refine


def _chain(points: np.ndarray, link: float) -> list[list[int]]:
    """Order points into chains by repeatedly walking to the nearest unused neighbour."""
    tree = cKDTree(points)
    unused = set(range(len(points)))
    chains = []
    k = min(len(points), 8)
    while unused:
        start = min(unused)
        chain = [start]
        unused.discard(start)
        for direction in (0, 1):
            cur = chain[-1] if direction == 0 else chain[0]
            while True:
                dists, idx = tree.query(points[cur], k=k)
                nxt = next((int(i) for d, i in zip(np.atleast_1d(dists), np.atleast_1d(idx))
                            if int(i) in unused and d <= link), None)
                if nxt is None:
                    break
                unused.discard(nxt)
                if direction == 0:
                    chain.append(nxt)
                else:
                    chain.insert(0, nxt)
                cur = nxt
        chains.append(chain)
    return chains


def _unwrap_near(p, ref):
    return ref + (np.asarray(p) - ref + np.pi) % (2 * np.pi) - np.pi


def _densify(br: _Branch, project, chord_tol: float, max_points: int) -> None:
    """Insert refined midpoints until every chord is within ``chord_tol`` of the curve."""
    while len(br.points) < max_points:
        nseg = len(br.points) if br.closed else len(br.points) - 1
        if nseg < 1:
            return
        p0, p1 = br.params[:nseg], np.roll(br.params, -1, axis=0)[:nseg]
        x0, x1 = br.points[:nseg], np.roll(br.points, -1, axis=0)[:nseg]
        p1 = _unwrap_near(p1, p0)
        if br.refine.sign > 0:
            # a crossing is an unordered pair; match the order of the neighbour
            p1s = _unwrap_near(p1[:, [2, 3, 0, 1]], p0)
            swap = np.abs(p1s - p0).sum(axis=1) < np.abs(p1 - p0).sum(axis=1)
            p1 = np.where(swap[:, None], p1s, p1)
        q, ok = br.refine(0.5 * (p0 + p1))
        xm = project(q)
        need = ok & (np.linalg.norm(xm - 0.5 * (x0 + x1), axis=1) > chord_tol)
        need &= (np.linalg.norm(xm - x0, axis=1) > 0) & (np.linalg.norm(xm - x1, axis=1) > 0)
        if not need.any():
            return
        params, points = [], []
        for k in range(len(br.points)):
            params.append(br.params[k])
            points.append(br.points[k])
            if k < nseg and need[k]:
                params.append(q[k])
                points.append(xm[k])
        br.params, br.points = np.array(params), np.array(points)


def double_curve(surface: ProductSurface, projection: Projection | str = "stereo:default", n: int = 96,
                 tol: float = 1e-8, sep_min: float = 0.05, chord_tol: float = 2e-7,
                 max_points: int = 50000) -> list[PolylineCurve]:
    """Real self-intersection curves of the projected surface.

    Two kinds of points are collected: parameter pairs p1 != p2 with
    ``sigma(p1) = sigma(p2)`` (crossings), and parameters where the map drops
    rank, where two sheets meet tangentially (cuspidal edges).  Candidate
    pairs come from a radius search among grid samples and are refined by
    Gauss-Newton; the refined points are chained into polylines and
    densified until every chord is within ``chord_tol`` of the curve.
    """
    if isinstance(projection, str):
        projection = Projection.parse(projection)
    alpha, beta, pts = surface.grid(n, n)
    flat = pts.reshape(-1, 4)
    ai, bi = np.meshgrid(alpha, beta, indexing="ij")
    par = np.stack([ai.ravel(), bi.ravel()], axis=1)
    step = max(np.linalg.norm(np.diff(pts, axis=0), axis=-1).max(),
               np.linalg.norm(np.diff(pts, axis=1), axis=-1).max())
    cell = 2 * np.pi / n

    def project(p):
        return projection.apply_array(surface.evaluate(p[:, 0], p[:, 1]))

    branches = []
    tree = cKDTree(flat)
    signs = (1.0, -1.0) if projection.kind == "central" else (1.0,)
    for sign in signs:
        refine = _collision_refiner(surface, sign, tol, sep_min)
        if sign > 0:
            pairs = tree.query_pairs(0.75 * step, output_type="ndarray")
        else:
            near = tree.query_ball_point(-flat, 0.75 * step)
            pairs = np.array([(i, j) for i, js in enumerate(near) for j in js if i < j]).reshape(-1, 2)
        if len(pairs) == 0:
            continue
        ga = _torus_gap(par[pairs[:, 0], 0], par[pairs[:, 1], 0])
        gb = _torus_gap(par[pairs[:, 0], 1], par[pairs[:, 1], 1])
        # grid neighbours are trivially close; only distant parameters can collide
        keep = np.maximum(ga, gb) > max(sep_min, 4 * cell)
        if sign < 0:
            # (a, b) ~ (-a, b) and (a, -b) are the trivial antipodal identifications
            keep &= np.minimum(ga, gb) > sep_min
        pairs = pairs[keep]
        if len(pairs) == 0:
            continue
        # one candidate per pair of 2x2 grid blocks
        ij = np.stack([ai.ravel(), bi.ravel()], axis=1)
        blocks = np.floor(ij / (2 * cell)).astype(int)
        keys = np.concatenate([blocks[pairs[:, 0]], blocks[pairs[:, 1]]], axis=1)
        _, first = np.unique(keys, axis=0, return_index=True)
        pairs = pairs[np.sort(first)]
        q, ok = refine(np.concatenate([par[pairs[:, 0]], par[pairs[:, 1]]], axis=1))
        branches += _branches_from(q[ok], refine, project, step, "crossing")
    for axis in (0, 1):
        refine = _critical_refiner(surface, tol, axis, 2 * cell)
        q = _critical_candidates(surface, alpha, beta, axis)
        if len(q):
            q, ok = refine(q)
            branches += _branches_from(q[ok], refine, project, step, "cuspidal")

    curves = []
    for br in branches:
        _densify(br, project, chord_tol, max_points)
        if len(br.points) >= (8 if br.closed else 2):
            curves.append(PolylineCurve(br.points, br.closed, br.kind))
    return _dedupe(curves, 10 * chord_tol + 1e-6)


def _critical_candidates(surface, alpha, beta, axis) -> np.ndarray:
    """Per scan line of fixed parameter, the grid point with the most degenerate Jacobian."""
    _, jac = surface.evaluate_with_jacobian(alpha[:, None], beta[None, :])
    sv = np.linalg.svd(jac, compute_uv=False)
    ratio = sv[..., 1] / sv[..., 0]
    if axis == 1:
        ratio = ratio.T
    lines, scan = (beta, alpha) if axis == 0 else (alpha, beta)
    k = np.argmin(ratio, axis=0)
    good = ratio[k, np.arange(len(lines))] <= 0.2
    t, fixed = scan[k[good]], lines[good]
    out = np.zeros((int(good.sum()), 4))
    out[:, axis], out[:, 1 - axis] = t, fixed
    return out


def _branches_from(params, refine, project, step, kind) -> list:
    if len(params) == 0:
        return []
    # both orders of a pair: equal points for crossings, antipodal representatives
    # (both on the preimage curve) for collisions under the central projection
    keyed = np.concatenate([params, params[:, [2, 3, 0, 1]]])
    pts = project(keyed)
    tree = cKDTree(pts)
    taken = np.zeros(len(pts), bool)
    keep = []
    for k in range(len(pts)):
        if taken[k]:
            continue
        taken[tree.query_ball_point(pts[k], 1e-9)] = True
        keep.append(k)
    pts, keyed = pts[keep], keyed[keep]
    scale = max(np.ptp(pts, axis=0).max(), step)
    out = []
    for chain in _chain(pts, link=0.25 * scale):
        gaps = np.linalg.norm(np.diff(pts[chain], axis=0), axis=1)
        ends = np.linalg.norm(pts[chain[0]] - pts[chain[-1]])
        closed = len(chain) > 3 and ends <= 3 * (gaps.max() if len(gaps) else 0)
        out.append(_Branch(keyed[chain], pts[chain], refine, bool(closed), kind))
    return out


def _dedupe(curves: list, tol: float) -> list:
    from .polyline import curve_distance

    kept = []
    for c in sorted(curves, key=len, reverse=True):
        if any(curve_distance(c.points, k).max() < tol for k in kept):
            continue
        kept.append(c)
    return kept


# --- hyperplane sections -------------------------------------------------------------------------


@dataclass
class SectionComponent:
    """One factor of the section polynomial and the curves it cuts out.

    ``kind`` is ``"left_fiber"`` (factor in (u, s) only: curves {a} * B),
    ``"right_fiber"`` (factor in (v, w) only: curves A * {b}) or ``"curve"``.
    """

    kind: str
    factor: str
    multiplicity: int
    real_roots: list  # projective ratios u/s or v/w (floats; inf for s = 0)
    branches: list  # polylines in parameter space (angles)

    @property
    def isolated(self) -> bool:
        return self.kind != "curve" and not self.real_roots


@dataclass
class Section:
    polynomial: str
    content: object
    components: list

    def to_json(self) -> dict:
        return {
            "polynomial": self.polynomial,
            "content": str(self.content),
            "components": [
                {"kind": c.kind, "factor": c.factor, "multiplicity": c.multiplicity,
                 "real_roots": c.real_roots, "isolated": c.isolated,
                 "branches": [b.tolist() for b in c.branches]}
                for c in self.components
            ],
        }


def _symbols():
    import sympy

    return sympy.symbols("u s v w")


def section_polynomial(surface: ProductSurface, normal, offset=0):
    """``normal . numerators - offset * denominator`` as a sympy polynomial."""
    import sympy

    u, s, v, w = _symbols()
    normal = [sympy.Rational(str(Fraction(c))) for c in normal]
    offset = sympy.Rational(str(Fraction(offset)))

    def to_expr(bf):
        return sum(sympy.Rational(str(Fraction(c))) * u**i * s ** (2 - i) * v**j * w ** (2 - j)
                   for i, row in enumerate(bf) for j, c in enumerate(row) if c)

    expr = sum(c * to_expr(f) for c, f in zip(normal, surface.nums)) - offset * to_expr(surface.den)
    return sympy.Poly(sympy.expand(expr), u, s, v, w)


def _binary_real_roots(poly, x, y) -> list:
    """Real projective roots x/y of a binary form (inf for y = 0), sorted."""
    import sympy

    roots = []
    deg = poly.as_poly(x, y).total_degree()
    affine = sympy.Poly(poly.as_expr().subs(y, 1), x)
    if affine.degree() < deg:
        roots.append(math.inf)
    for r in sympy.real_roots(affine):
        roots.append(float(r))
    return sorted(set(roots))


def _ratio_to_angle(r: float) -> float:
    # (x : y) = (sin t/2 : cos t/2)
    return math.pi if math.isinf(r) else 2 * math.atan(r)


def hyperplane_section(surface: ProductSurface, normal, offset=0, n: int = 256) -> Section:
    """Decompose the section ``{x . normal = offset}`` of the surface.

    The section polynomial is factored over Q.  Factors in one parameter
    pair give whole fibers ({a} * B or A * {b}) at their real roots, or an
    isolated component when there are none; mixed factors are traced by
    marching squares on the parameter torus and polished by Newton steps.
    """
    import sympy

    u, s, v, w = _symbols()
    poly = section_polynomial(surface, normal, offset)
    if poly.is_zero:
        raise ValueError("surface lies inside the hyperplane")
    content, factors = sympy.factor_list(poly.as_expr(), u, s, v, w)
    comps = []
    for fac, mult in factors:
        syms = fac.free_symbols
        text = str(fac)
        if syms <= {u, s}:
            roots = _binary_real_roots(fac, u, s)
            branches = [np.array([[_ratio_to_angle(r), 0.0], [_ratio_to_angle(r), 2 * np.pi]]) for r in roots]
            comps.append(SectionComponent("left_fiber", text, mult, roots, branches))
        elif syms <= {v, w}:
            roots = _binary_real_roots(fac, v, w)
            branches = [np.array([[0.0, _ratio_to_angle(r)], [2 * np.pi, _ratio_to_angle(r)]]) for r in roots]
            comps.append(SectionComponent("right_fiber", text, mult, roots, branches))
        else:
            comps.append(SectionComponent("curve", text, mult, [], _trace_factor(fac, n)))
    comps = [c for c in comps if c.kind == "curve" and c.branches or c.kind != "curve"]
    return Section(str(poly.as_expr()), content, comps)


def _trace_factor(fac, n: int) -> list:
    import sympy

    u, s, v, w = _symbols()
    fn = sympy.lambdify((u, s, v, w), fac, "numpy")
    grad = [sympy.lambdify((u, s, v, w), sympy.diff(fac, x), "numpy") for x in (u, s, v, w)]
    # odd degree in a parameter pair makes the factor antiperiodic in that angle
    pu = 4 * np.pi if sympy.Poly(fac, u, s).total_degree() % 2 else 2 * np.pi
    pv = 4 * np.pi if sympy.Poly(fac, v, w).total_degree() % 2 else 2 * np.pi
    nu, nv = int(n * pu / (2 * np.pi)), int(n * pv / (2 * np.pi))
    a = pu * np.arange(nu) / nu
    b = pv * np.arange(nv) / nv
    A, B = np.meshgrid(a, b, indexing="ij")
    vals = fn(np.sin(A / 2), np.cos(A / 2), np.sin(B / 2), np.cos(B / 2))
    curves = torus_contours(np.broadcast_to(vals, A.shape), (pu, pv))

    def value_and_grad(t):
        x = (np.sin(t[0] / 2), np.cos(t[0] / 2), np.sin(t[1] / 2), np.cos(t[1] / 2))
        g = [gk(*x) for gk in grad]
        ga = 0.5 * (g[0] * x[1] - g[1] * x[0])
        gb = 0.5 * (g[2] * x[3] - g[3] * x[2])
        return fn(*x), np.array([ga, gb], float)

    out = []
    for c in curves:
        pol = []
        for t in c:
            t = np.array(t, float)
            for _ in range(20):
                f, g = value_and_grad(t)
                gg = float(g @ g)
                if gg == 0:
                    break
                t = t - f * g / gg
                if abs(f) < 1e-14:
                    break
            pol.append(t % (2 * np.pi))
        out.append(_unwrap_params(np.array(pol)))
    return _dedupe_params(out)


def _unwrap_params(pts: np.ndarray) -> np.ndarray:
    pts = pts.copy()
    for k in range(2):
        d = np.diff(pts[:, k])
        pts[1:, k] += np.cumsum(-np.round(d / (2 * np.pi)) * 2 * np.pi)
    return pts


def _dedupe_params(curves: list, tol: float = 1e-6) -> list:
    kept = []
    for c in curves:
        cm = c % (2 * np.pi)
        dup = False
        for k in kept:
            km = k % (2 * np.pi)
            d = np.min(np.linalg.norm(_torus_gap(cm[:, None, :], km[None, :, :]), axis=2), axis=1)
            if d.max() < tol:
                dup = True
                break
        if not dup:
            kept.append(c)
    return kept


def fiber_in_circle(surface: ProductSurface, factor: str, circle) -> bool:
    """Exact check that the fibers over every root of ``factor`` lie on ``circle``.

    True iff the factor divides each affine form of the plane pair composed
    with the surface map; this also covers complex (isolated) roots.
    """
    import sympy

    u, s, v, w = _symbols()
    fac = sympy.sympify(factor, locals={"u": u, "s": s, "v": v, "w": w})
    for n, d in ((circle.n1, circle.d1), (circle.n2, circle.d2)):
        poly = section_polynomial(surface, n, d)
        if poly.is_zero:
            continue
        _, r = sympy.div(poly, sympy.Poly(fac, u, s, v, w))
        if not r.is_zero:
            return False
    return True


def fiber_points(surface: ProductSurface, comp: SectionComponent, n: int = 64) -> list[np.ndarray]:
    """Float S^3 points of each real fiber of a fiber component."""
    out = []
    t = 2 * np.pi * np.arange(n) / n
    for r in comp.real_roots:
        ang = _ratio_to_angle(r)
        if comp.kind == "left_fiber":
            out.append(surface.evaluate(np.full_like(t, ang), t))
        else:
            out.append(surface.evaluate(t, np.full_like(t, ang)))
    return out


def stereo_points(pts: np.ndarray) -> np.ndarray:
    return stereographic_array(pts)
