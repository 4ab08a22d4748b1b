"""Region export: JSON documents and a small self-contained SVG renderer."""

from __future__ import annotations

import json

import numpy as np

from .regions import RnaRegion, RnhRegion, RnvRegion


def _vec(v) -> list:
    return [float(x) for x in np.asarray(v, dtype=float)]


def region_document(rnh: RnhRegion, rnv: RnvRegion, rna: RnaRegion,
                    arc_tol: float = 1e-3, boxes=None) -> dict:
    rings = rna.boundary_rings(arc_tol)
    doc = {
        "rnh": {
            "h1": _vec(rnh.h1), "h2": _vec(rnh.h2),
            "h3": _vec(rnh.h3), "h4": _vec(rnh.h4),
            "a": float(rnh.a), "b": float(rnh.b), "c": float(rnh.c),
            "alpha": float(rnh.alpha), "t1": _vec(rnh.t1),
        },
        "rnv": {
            "exists": bool(rnv.exists),
            "case": int(rnv.case_id),
            "vertices": [_vec(v) for v in rnv.vertices],
            "caps": [
                {
                    "center": _vec(c.center),
                    "semi_lateral": float(c.semi_lateral),
                    "semi_forward": float(c.semi_forward),
                    "eta_cut": float(c.eta_cut),
                    "lateral_axis": _vec(c.frame.u),
                    "forward_axis": _vec(c.frame.t),
                }
                for c in rnv.cap_ellipses
            ],
        },
        "rna_polygon": [[float(x), float(y)] for x, y in
                        (rings[0] if rings else [])],
    }
    if len(rings) > 1:
        doc["rna_polygon_parts"] = [[[float(x), float(y)] for x, y in ring]
                                    for ring in rings]
    if boxes is not None:
        bh, bv = boxes
        doc["boxes"] = {
            "bh": {k: _vec(getattr(bh, k)) for k in ("a", "b", "c", "d")},
            "bv": {k: _vec(getattr(bv, k)) for k in ("a", "b", "c", "d")},
        }
    return doc


def dump_json(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _svg_path(ring, tf) -> str:
    pts = [tf(p) for p in ring]
    d = "M " + " L ".join("%.2f %.2f" % (x, y) for x, y in pts) + " Z"
    return d


def render_svg(scene, rnh: RnhRegion, rnv: RnvRegion, rna: RnaRegion, path,
               meters_per_px: float = 0.01, margin_m: float = 0.5,
               arc_tol: float = 1e-3, extra_paths=None) -> None:
    """Plan-view SVG: RNA filled, RNH/RNV outlines, markers as segments."""
    rings = rna.boundary_rings(arc_tol)
    rnh_ring = rnh.boundary_2d(arc_tol)
    rnv_rings = rnv.boundary_2d(arc_tol) if rnv is not None else []
    marker_segs = []
    for m in scene.markers:
        xy = m.points[:, :2]
        i = int(np.argmin(xy[:, 0] + 1e-6 * xy[:, 1]))
        j = int(np.argmax(xy[:, 0] + 1e-6 * xy[:, 1]))
        marker_segs.append((xy[i], xy[j]))

    all_pts = [rnh_ring] + rnv_rings + list(rings)
    all_pts += [np.array(seg) for seg in marker_segs]
    if extra_paths:
        all_pts += [np.asarray(p)[:, :2] for p in extra_paths]
    allxy = np.vstack([np.atleast_2d(a) for a in all_pts if len(a)])
    x0, y0 = allxy.min(axis=0) - margin_m
    x1, y1 = allxy.max(axis=0) + margin_m
    w = int(np.ceil((x1 - x0) / meters_per_px))
    h = int(np.ceil((y1 - y0) / meters_per_px))

    def tf(p):
        return ((p[0] - x0) / meters_per_px, (y1 - p[1]) / meters_per_px)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]
    for ring in rings:
        parts.append(f'<path d="{_svg_path(ring, tf)}" fill="#f4b183" '
                     f'fill-opacity="0.6" stroke="none"/>')
    if len(rnh_ring):
        parts.append(f'<path d="{_svg_path(rnh_ring, tf)}" fill="none" '
                     f'stroke="#c00000" stroke-width="2"/>')
    for ring in rnv_rings:
        parts.append(f'<path d="{_svg_path(ring, tf)}" fill="none" '
                     f'stroke="#2e74b5" stroke-width="2"/>')
    for a, b in marker_segs:
        (xa, ya), (xb, yb) = tf(a), tf(b)
        parts.append(f'<line x1="{xa:.2f}" y1="{ya:.2f}" x2="{xb:.2f}" '
                     f'y2="{yb:.2f}" stroke="#1f4e79" stroke-width="4"/>')
    if extra_paths:
        for p in extra_paths:
            pts = [tf(q[:2]) for q in np.asarray(p)]
            d = "M " + " L ".join("%.2f %.2f" % (x, y) for x, y in pts)
            parts.append(f'<path d="{d}" fill="none" stroke="#538135" '
                         f'stroke-width="2" stroke-dasharray="6 4"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
