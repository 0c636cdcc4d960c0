"""Marching squares on a periodic grid (the parameter torus)."""
from __future__ import annotations

from collections import defaultdict

import numpy as np

# edge ids of a cell: 0 bottom (i,j)-(i+1,j), 1 right (i+1,j)-(i+1,j+1),
# 2 top (i,j+1)-(i+1,j+1), 3 left (i,j)-(i,j+1); corners 0..3 = (i,j), (i+1,j), (i+1,j+1), (i,j+1)
_SEGMENTS = {
    0: [], 15: [],
    1: [(3, 0)], 14: [(3, 0)],
    2: [(0, 1)], 13: [(0, 1)],
    4: [(1, 2)], 11: [(1, 2)],
    8: [(2, 3)], 7: [(2, 3)],
    3: [(3, 1)], 12: [(3, 1)],
    6: [(0, 2)], 9: [(0, 2)],
}


def _edge_key(i, j, e, nu, nv):
    """Global identifier of a cell edge, shared by the two adjacent cells."""
    if e == 0:
        return ("h", i % nu, j % nv)
    if e == 2:
        return ("h", i % nu, (j + 1) % nv)
    if e == 3:
        return ("v", i % nu, j % nv)
    return ("v", (i + 1) % nu, j % nv)


def torus_contours(values: np.ndarray, periods=(2 * np.pi, 2 * np.pi)) -> list[np.ndarray]:
    """Zero set of a periodic sampled function as polylines in parameter space.

    ``values[i, j]`` samples the function at ``(i * pu / nu, j * pv / nv)``.
    Returned polylines are unwrapped (coordinates may leave the fundamental
    domain); closed loops repeat their first vertex at the end.
    """
    f = np.asarray(values, float)
    nu, nv = f.shape
    du, dv = periods[0] / nu, periods[1] / nv
    pos = {}
    adj = defaultdict(list)

    def crossing(i, j, e):
        key = _edge_key(i, j, e, nu, nv)
        if key not in pos:
            kind, a, b = key
            if kind == "h":
                f0, f1 = f[a, b], f[(a + 1) % nu, b]
                t = f0 / (f0 - f1)
                pos[key] = ((a + t) * du, b * dv)
            else:
                f0, f1 = f[a, b], f[a, (b + 1) % nv]
                t = f0 / (f0 - f1)
                pos[key] = (a * du, (b + t) * dv)
        return key

    for i in range(nu):
        for j in range(nv):
            c = [f[i, j], f[(i + 1) % nu, j], f[(i + 1) % nu, (j + 1) % nv], f[i, (j + 1) % nv]]
            idx = sum(1 << k for k in range(4) if c[k] > 0)
            if idx in (5, 10):
                centre = sum(c) / 4
                # saddle: the cell centre decides which corners connect
                if (centre > 0) == (idx == 5):
                    segs = [(0, 1), (2, 3)]
                else:
                    segs = [(3, 0), (1, 2)]
            else:
                segs = _SEGMENTS[idx]
            for a, b in segs:
                ka, kb = crossing(i, j, a), crossing(i, j, b)
                adj[ka].append(kb)
                adj[kb].append(ka)

    curves = []
    seen = set()
    for start in list(adj):
        if start in seen:
            continue
        # walk to an end if open, else loop
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [k for k in adj[cur] if k != prev and k not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            chain.append(cur)
            seen.add(cur)
        closed = len(chain) > 2 and start in adj[cur]
        curves.append(_unwrap([pos[k] for k in chain] + ([pos[start]] if closed else []), periods))
    return curves


def _unwrap(points, periods) -> np.ndarray:
    pts = np.array(points, float)
    for k in range(2):
        d = np.diff(pts[:, k])
        jumps = -np.round(d / periods[k]) * periods[k]
        pts[1:, k] += np.cumsum(jumps)
    return pts
