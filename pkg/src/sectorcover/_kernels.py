"""Hot numeric kernels.

Every kernel has a pure-numpy implementation and, when numba is importable
and ``SECTORCOVER_DISABLE_NUMBA`` is unset (or ``0``), an ``@njit`` twin.
The public names in this module are bound to whichever path is active.
Both paths must agree to rounding; ``tests/test_kernels.py`` checks that.
"""

import os

import numpy as np

__all__ = [
    "USING_NUMBA",
    "wedge_profile",
    "sector_violations",
    "has_crossing",
    "wedge_profile_numpy",
    "sector_violations_numpy",
    "has_crossing_numpy",
]


def _numba_requested():
    flag = os.environ.get("SECTORCOVER_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# numpy reference path
# ---------------------------------------------------------------------------

def wedge_profile_numpy(pts, phis, half):
    """Tightest wedge of half-angle ``half`` around ``pts`` for each bisector angle.

    For bisector direction ``phi`` the wedge rays point along ``phi - half`` and
    ``phi + half``.  Each ray is pushed onto the point set (support line), and
    the apex is the intersection of the two support lines.

    Returns ``(apex, maxdist)`` with shapes ``(m, 2)`` and ``(m,)``; ``maxdist``
    is the largest distance from the apex to any point.
    """
    pts = np.asarray(pts, dtype=float)
    phis = np.asarray(phis, dtype=float)
    a = phis - half
    b = phis + half
    # inward normals of the two rays
    n1 = np.stack([-np.sin(a), np.cos(a)], axis=1)
    n2 = np.stack([np.sin(b), -np.cos(b)], axis=1)
    h1 = (n1 @ pts.T).min(axis=1)
    h2 = (n2 @ pts.T).min(axis=1)
    det = n1[:, 0] * n2[:, 1] - n1[:, 1] * n2[:, 0]
    ax = (h1 * n2[:, 1] - h2 * n1[:, 1]) / det
    ay = (n1[:, 0] * h2 - n2[:, 0] * h1) / det
    apex = np.stack([ax, ay], axis=1)
    d = np.hypot(pts[None, :, 0] - ax[:, None], pts[None, :, 1] - ay[:, None])
    return apex, d.max(axis=1)


def sector_violations_numpy(pts, apex, axis_angle, half, radius):
    """Signed violation of each point against a closed circular sector.

    Value is the max of the signed distances outside the two bounding
    half-planes and the disk; ``<= 0`` means inside.
    """
    pts = np.asarray(pts, dtype=float)
    dx = pts[:, 0] - apex[0]
    dy = pts[:, 1] - apex[1]
    a = axis_angle - half
    b = axis_angle + half
    w1 = -(-np.sin(a) * dx + np.cos(a) * dy)
    w2 = -(np.sin(b) * dx - np.cos(b) * dy)
    rr = np.hypot(dx, dy) - radius
    return np.maximum(np.maximum(w1, w2), rr)


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def has_crossing_numpy(verts, tol=1e-12):
    """True if any two non-adjacent segments of the polyline touch or cross.

    Adjacent segments count as crossing only when they fold back onto each
    other (overlap beyond the shared vertex).
    """
    v = np.asarray(verts, dtype=float)
    n = len(v) - 1
    if n < 2:
        return False
    i, j = np.triu_indices(n, k=1)
    p1, p2 = v[i], v[i + 1]
    q1, q2 = v[j], v[j + 1]
    scale = max(1.0, float(np.abs(v).max()))
    eps = tol * scale * scale
    d1 = _orient(q1[:, 0], q1[:, 1], q2[:, 0], q2[:, 1], p1[:, 0], p1[:, 1])
    d2 = _orient(q1[:, 0], q1[:, 1], q2[:, 0], q2[:, 1], p2[:, 0], p2[:, 1])
    d3 = _orient(p1[:, 0], p1[:, 1], p2[:, 0], p2[:, 1], q1[:, 0], q1[:, 1])
    d4 = _orient(p1[:, 0], p1[:, 1], p2[:, 0], p2[:, 1], q2[:, 0], q2[:, 1])
    proper = (((d1 > eps) & (d2 < -eps)) | ((d1 < -eps) & (d2 > eps))) & (
        ((d3 > eps) & (d4 < -eps)) | ((d3 < -eps) & (d4 > eps))
    )
    adjacent = j == i + 1
    if np.any(proper & ~adjacent):
        return True
    # touching / collinear overlap: distance between segments ~ 0
    for k in np.nonzero(~proper)[0]:
        a0, a1, b0, b1 = p1[k], p2[k], q1[k], q2[k]
        if adjacent[k]:
            # shared vertex a1 == b0; fold-back iff the segments overlap
            u = a0 - a1
            w = b1 - a1
            cr = u[0] * w[1] - u[1] * w[0]
            if abs(cr) <= eps and (u @ w) > 0:
                return True
            continue
        if _seg_seg_dist(a0, a1, b0, b1) <= tol * scale:
            return True
    return False


def _pt_seg_dist(p, a, b):
    ab = b - a
    L = ab @ ab
    t = 0.0 if L == 0 else min(1.0, max(0.0, ((p - a) @ ab) / L))
    c = a + t * ab
    return float(np.hypot(*(p - c)))


def _seg_seg_dist(a0, a1, b0, b1):
    return min(
        _pt_seg_dist(a0, b0, b1),
        _pt_seg_dist(a1, b0, b1),
        _pt_seg_dist(b0, a0, a1),
        _pt_seg_dist(b1, a0, a1),
    )


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

USING_NUMBA = False
wedge_profile = wedge_profile_numpy
sector_violations = sector_violations_numpy
has_crossing = has_crossing_numpy

if _numba_requested():
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a soft dependency
        njit = None

    if njit is not None:

        @njit(cache=True)
        def _wedge_profile_nb(pts, phis, half):
            m = phis.shape[0]
            n = pts.shape[0]
            apex = np.empty((m, 2))
            out = np.empty(m)
            for k in range(m):
                a = phis[k] - half
                b = phis[k] + half
                n1x = -np.sin(a)
                n1y = np.cos(a)
                n2x = np.sin(b)
                n2y = -np.cos(b)
                h1 = np.inf
                h2 = np.inf
                for i in range(n):
                    s1 = n1x * pts[i, 0] + n1y * pts[i, 1]
                    s2 = n2x * pts[i, 0] + n2y * pts[i, 1]
                    if s1 < h1:
                        h1 = s1
                    if s2 < h2:
                        h2 = s2
                det = n1x * n2y - n1y * n2x
                ax = (h1 * n2y - h2 * n1y) / det
                ay = (n1x * h2 - n2x * h1) / det
                apex[k, 0] = ax
                apex[k, 1] = ay
                best = 0.0
                for i in range(n):
                    d = np.hypot(pts[i, 0] - ax, pts[i, 1] - ay)
                    if d > best:
                        best = d
                out[k] = best
            return apex, out

        @njit(cache=True)
        def _sector_violations_nb(pts, apex, axis_angle, half, radius):
            n = pts.shape[0]
            out = np.empty(n)
            a = axis_angle - half
            b = axis_angle + half
            sa, ca = np.sin(a), np.cos(a)
            sb, cb = np.sin(b), np.cos(b)
            for i in range(n):
                dx = pts[i, 0] - apex[0]
                dy = pts[i, 1] - apex[1]
                w1 = -(-sa * dx + ca * dy)
                w2 = -(sb * dx - cb * dy)
                rr = np.hypot(dx, dy) - radius
                v = w1
                if w2 > v:
                    v = w2
                if rr > v:
                    v = rr
                out[i] = v
            return out

        @njit(cache=True)
        def _pt_seg_dist_nb(px, py, ax, ay, bx, by):
            abx = bx - ax
            aby = by - ay
            L = abx * abx + aby * aby
            t = 0.0
            if L > 0.0:
                t = ((px - ax) * abx + (py - ay) * aby) / L
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            return np.hypot(px - ax - t * abx, py - ay - t * aby)

        @njit(cache=True)
        def _has_crossing_nb(v, tol):
            n = v.shape[0] - 1
            if n < 2:
                return False
            scale = 1.0
            for i in range(v.shape[0]):
                for c in range(2):
                    if abs(v[i, c]) > scale:
                        scale = abs(v[i, c])
            eps = tol * scale * scale
            for i in range(n):
                ax, ay = v[i, 0], v[i, 1]
                bx, by = v[i + 1, 0], v[i + 1, 1]
                for j in range(i + 1, n):
                    cx, cy = v[j, 0], v[j, 1]
                    dx, dy = v[j + 1, 0], v[j + 1, 1]
                    if j == i + 1:
                        ux, uy = ax - bx, ay - by
                        wx, wy = dx - bx, dy - by
                        cr = ux * wy - uy * wx
                        if abs(cr) <= eps and ux * wx + uy * wy > 0.0:
                            return True
                        continue
                    d1 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
                    d2 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
                    d3 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
                    d4 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
                    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
                        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
                    ):
                        return True
                    dist = min(
                        _pt_seg_dist_nb(ax, ay, cx, cy, dx, dy),
                        _pt_seg_dist_nb(bx, by, cx, cy, dx, dy),
                        _pt_seg_dist_nb(cx, cy, ax, ay, bx, by),
                        _pt_seg_dist_nb(dx, dy, ax, ay, bx, by),
                    )
                    if dist <= tol * scale:
                        return True
            return False

        def wedge_profile(pts, phis, half):
            return _wedge_profile_nb(
                np.ascontiguousarray(pts, dtype=np.float64),
                np.ascontiguousarray(phis, dtype=np.float64),
                float(half),
            )

        def sector_violations(pts, apex, axis_angle, half, radius):
            return _sector_violations_nb(
                np.ascontiguousarray(pts, dtype=np.float64),
                np.ascontiguousarray(apex, dtype=np.float64),
                float(axis_angle),
                float(half),
                float(radius),
            )

        def has_crossing(verts, tol=1e-12):
            return bool(_has_crossing_nb(np.ascontiguousarray(verts, dtype=np.float64), float(tol)))

        wedge_profile.__doc__ = wedge_profile_numpy.__doc__
        sector_violations.__doc__ = sector_violations_numpy.__doc__
        has_crossing.__doc__ = has_crossing_numpy.__doc__
        USING_NUMBA = True
