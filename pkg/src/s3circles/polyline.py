"""Polyline curves in R^3 (or R^4) and their JSON form."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PolylineCurve:
    points: np.ndarray
    closed: bool = True
    kind: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, float)
        if pts.ndim != 2 or len(pts) < 2:
            raise ValueError("polyline needs at least two points")
        if np.any(np.linalg.norm(np.diff(pts, axis=0), axis=1) == 0):
            raise ValueError("consecutive points must be distinct")
        if self.closed and len(pts) < 8:
            raise ValueError("closed curves need at least 8 vertices")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        """Start and end points of every segment, including the closing one."""
        a = self.points
        b = np.roll(a, -1, axis=0) if self.closed else a[1:]
        return (a, b) if self.closed else (a[:-1], b)

    def resampled(self, n: int) -> "PolylineCurve":
        """Uniform-in-arclength resampling with ``n`` vertices."""
        a, b = self.segments()
        lengths = np.linalg.norm(b - a, axis=1)
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        total = cum[-1]
        ts = np.linspace(0.0, total, n, endpoint=not self.closed)
        idx = np.clip(np.searchsorted(cum, ts, side="right") - 1, 0, len(lengths) - 1)
        frac = (ts - cum[idx]) / lengths[idx]
        pts = a[idx] + frac[:, None] * (b[idx] - a[idx])
        return PolylineCurve(pts, self.closed, self.kind)

    def reversed(self) -> "PolylineCurve":
        return PolylineCurve(self.points[::-1].copy(), self.closed, self.kind)

    def to_json(self) -> dict:
        return {"closed": self.closed, "kind": self.kind, "points": self.points.tolist()}

    @classmethod
    def from_json(cls, obj) -> "PolylineCurve":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(np.array(obj["points"], float), bool(obj.get("closed", True)), obj.get("kind", ""))


def point_to_segments(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from each point of ``p`` (k, dim) to the nearest segment a[i]-b[i]."""
    p = np.atleast_2d(p)
    ab = b - a
    ab2 = np.einsum("ij,ij->i", ab, ab)
    t = np.einsum("kij,ij->ki", p[:, None, :] - a[None], ab) / ab2[None]
    t = np.clip(t, 0.0, 1.0)
    closest = a[None] + t[..., None] * ab[None]
    return np.linalg.norm(p[:, None, :] - closest, axis=2).min(axis=1)


def curve_distance(p: np.ndarray, curve: PolylineCurve, chunk: int = 512) -> np.ndarray:
    a, b = curve.segments()
    p = np.atleast_2d(p)
    return np.concatenate([point_to_segments(p[i:i + chunk], a, b) for i in range(0, len(p), chunk)])


def hausdorff(c1: PolylineCurve, c2: PolylineCurve) -> float:
    """Symmetric Hausdorff distance between vertex sets and the other polyline."""
    return float(max(curve_distance(c1.points, c2).max(), curve_distance(c2.points, c1).max()))


def distance_to_circle(points: np.ndarray, center, normal, radius: float) -> np.ndarray:
    """Exact distances from points of R^3 to a round circle."""
    pts = np.asarray(points, float) - np.asarray(center, float)
    n = np.asarray(normal, float) / np.linalg.norm(normal)
    h = pts @ n
    rho = np.linalg.norm(pts - h[:, None] * n, axis=1)
    return np.hypot(rho - radius, h)


def hausdorff_to_circle(curve: PolylineCurve, center, normal, radius: float) -> float:
    """Rigorous upper bound on the Hausdorff distance between a polyline and a round circle.

    Each segment pq is matched with the arc between the radial projections
    of p and q.  Every point of either lies within
    ``max(d(p), d(q)) + radius * (1 - cos(gap / 2))`` of the other, where
    ``gap`` is the angle of the arc.  Any arc left uncovered adds its
    length; a gap of a quarter turn or more gives an infinite bound.
    """
    pts = np.asarray(curve.points, float) - np.asarray(center, float)
    n = np.asarray(normal, float) / np.linalg.norm(normal)
    e1 = np.cross(n, [1.0, 0, 0] if abs(n[0]) < 0.9 else [0, 1.0, 0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    x, y = pts @ e1, pts @ e2
    if np.any(np.hypot(x, y) == 0):
        return float("inf")
    dist = distance_to_circle(curve.points, center, normal, radius)
    theta = np.arctan2(y, x)
    if curve.closed:
        theta, dist = np.append(theta, theta[0]), np.append(dist, dist[0])
    gap = np.diff(theta)
    gap = (gap + np.pi) % (2 * np.pi) - np.pi
    if np.any(np.abs(gap) >= np.pi / 2):
        return float("inf")
    unwrapped = np.concatenate([[0.0], np.cumsum(gap)])
    # an uncovered arc (rounding, or an open curve stopping short) costs at most its length
    missing = max(0.0, 2 * np.pi - (unwrapped.max() - unwrapped.min()))
    if missing >= np.pi / 2:
        return float("inf")
    bound = np.maximum(dist[:-1], dist[1:]) + radius * (1 - np.cos(gap / 2))
    return float(bound.max()) + radius * missing


def curves_to_json(curves) -> str:
    return json.dumps([c.to_json() for c in curves])
