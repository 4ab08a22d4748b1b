"""Convex polytope / polygon helpers: plane cross-sections and 2D hulls."""

from __future__ import annotations

import numpy as np

# Edges of a hexahedron given as vertices [J, K, M, N, J', K', M', N']:
# back face J-K-M-N (a rectangle), front face J'-K'-M'-N', four side edges.
HEX_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 0),   # back face
    (4, 5), (5, 6), (6, 7), (7, 4),   # front face
    (0, 4), (1, 5), (2, 6), (3, 7),   # connecting edges
]


def plane_section_z(vertices: np.ndarray, h: float, edges=HEX_EDGES,
                    tol: float = 1e-12) -> np.ndarray:
    """Cross-section polygon of a convex polytope with the plane z = h.

    Returns the section vertices (M, 3) ordered counter-clockwise in the
    x-y plane, or an empty array when the plane misses the polytope.
    Vertices lying exactly on the plane are included, so a plane touching
    a face or an edge yields that degenerate (zero-area) section.
    """
    verts = np.asarray(vertices, dtype=float)
    s = verts[:, 2] - h
    pts = [verts[i] for i in range(len(verts)) if abs(s[i]) <= tol]
    for i, j in edges:
        si, sj = s[i], s[j]
        if (si > tol and sj < -tol) or (si < -tol and sj > tol):
            t = si / (si - sj)
            pts.append(verts[i] + t * (verts[j] - verts[i]))
    if not pts:
        return np.empty((0, 3))
    pts = np.array(pts)
    # dedupe
    keep = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= 1e-9 for q in keep):
            keep.append(p)
    pts = np.array(keep)
    if len(pts) < 3:
        return pts
    centroid = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - centroid[1], pts[:, 0] - centroid[0])
    return pts[np.argsort(ang)]


def convex_hull_2d(points: np.ndarray) -> np.ndarray:
    """Convex hull (Andrew's monotone chain), CCW, no repeated last point."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                u = out[-1] - out[-2]
                v = p - out[-2]
                if u[0] * v[1] - u[1] * v[0] > 0:
                    break
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    return np.array(hull)


def point_in_convex_polygon(p, polygon: np.ndarray, tol: float = 1e-9) -> bool:
    """Membership in a CCW convex polygon; boundary (within tol) counts inside."""
    poly = np.asarray(polygon, dtype=float)
    n = len(poly)
    if n == 0:
        return False
    if n == 1:
        return bool(np.linalg.norm(np.asarray(p) - poly[0]) <= tol)
    if n == 2:
        a, b = poly
        ab = b - a
        L2 = float(ab @ ab)
        t = np.clip(float((np.asarray(p) - a) @ ab) / L2, 0.0, 1.0) if L2 > 0 else 0.0
        return bool(np.linalg.norm(np.asarray(p) - (a + t * ab)) <= tol)
    p = np.asarray(p, dtype=float)
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        edge = b - a
        # signed distance of p to the edge line, positive on the interior side
        cross = edge[0] * (p[1] - a[1]) - edge[1] * (p[0] - a[0])
        elen = float(np.hypot(edge[0], edge[1]))
        if elen > 0 and cross < -tol * elen:
            return False
    return True


def points_in_convex_polygon(pts: np.ndarray, polygon: np.ndarray,
                             tol: float = 1e-9) -> np.ndarray:
    """Vectorized membership test for an array of 2D points."""
    poly = np.asarray(polygon, dtype=float)
    pts = np.asarray(pts, dtype=float)
    if len(poly) < 3:
        return np.array([point_in_convex_polygon(p, poly, tol) for p in pts])
    inside = np.ones(len(pts), dtype=bool)
    for i in range(len(poly)):
        a = poly[i]
        b = poly[(i + 1) % len(poly)]
        edge = b - a
        elen = float(np.hypot(edge[0], edge[1]))
        cross = edge[0] * (pts[:, 1] - a[1]) - edge[1] * (pts[:, 0] - a[0])
        inside &= cross >= -tol * elen
    return inside


def polygon_area(polygon: np.ndarray) -> float:
    poly = np.asarray(polygon, dtype=float)
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
