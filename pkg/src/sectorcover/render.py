"""Deterministic SVG figures of placements, support wedges and unfoldings."""

import math

import numpy as np

from .geometry import unit

VIEW = 1000.0
MARGIN = 40.0

COLORS = {
    "sector": "#1f4e79",
    "arc": "#c0392b",
    "ray_u": "#2e7d32",
    "ray_v": "#6a1b9a",
    "contact": "#000000",
    "ghost": "#999999",
    "unfolded": "#e67e22",
    "chord": "#1f4e79",
}


def _f(x):
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


class Scene:
    """Collects primitives in world coordinates, then maps them into the viewport."""

    def __init__(self):
        self.items = []
        self.pts = []

    def polyline(self, pts, color, width=2.0, dash=None):
        pts = np.asarray(pts, dtype=float)
        self.items.append(("polyline", pts, color, width, dash))
        self.pts.extend(pts)

    def segment(self, a, b, color, width=1.5, dash=None):
        self.polyline([a, b], color, width, dash)

    def marker(self, p, color, label=None):
        p = np.asarray(p, dtype=float)
        self.items.append(("marker", p, color, label))
        self.pts.append(p)

    def sector(self, apex, axis_angle, angle, radius, color, dash=None):
        apex = np.asarray(apex, dtype=float)
        a0, a1 = axis_angle - angle / 2, axis_angle + angle / 2
        n = 64
        arc = [apex + radius * np.array([math.cos(t), math.sin(t)]) for t in np.linspace(a0, a1, n)]
        self.polyline([apex] + arc + [apex], color, 2.0, dash)

    def _transform(self):
        pts = np.array(self.pts) if self.pts else np.zeros((1, 2))
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = max(float((hi - lo).max()), 1e-9)
        s = (VIEW - 2 * MARGIN) / span
        off = MARGIN + 0.5 * ((VIEW - 2 * MARGIN) - s * (hi - lo))

        def tr(p):
            q = (np.asarray(p, dtype=float) - lo) * s + off
            return np.array([q[..., 0], VIEW - q[..., 1]]).T

        return tr

    def to_svg(self, title=""):
        tr = self._transform()
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(VIEW)}" height="{int(VIEW)}" '
            f'viewBox="0 0 {int(VIEW)} {int(VIEW)}">',
            f"<title>{title}</title>",
            f'<rect x="0" y="0" width="{int(VIEW)}" height="{int(VIEW)}" fill="white"/>',
        ]
        for it in self.items:
            if it[0] == "polyline":
                _, pts, color, width, dash = it
                q = tr(pts)
                coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in q)
                d = f' stroke-dasharray="{dash}"' if dash else ""
                out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"{d}/>')
            else:
                _, p, color, label = it
                x, y = tr(p)
                out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="5" fill="{color}"/>')
                if label:
                    out.append(f'<text x="{_f(x + 8)}" y="{_f(y - 8)}" font-size="20" '
                               f'font-family="sans-serif">{label}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def placement_figure(arc, sector, placement):
    sc = Scene()
    sc.sector(sector.apex, sector.axis_angle, sector.angle, sector.radius, COLORS["sector"])
    sc.polyline(placement.motion.apply(arc.vertices), COLORS["arc"], 3.0)
    return sc.to_svg(f"placement ({placement.candidate_kind}, violation {placement.violation + 0.0:.3e})")


def _ray_length(arc, origin):
    return 1.15 * float(np.hypot(*(arc.vertices - origin).T).max())


def certificates_figure(arc, pair):
    sc = Scene()
    sc.polyline(arc.vertices, COLORS["arc"], 3.0)
    for cert, name in ((pair.first, "U"), (pair.second, "V")):
        o = cert.ray_u.origin
        length = _ray_length(arc, o)
        sc.segment(o, o + length * cert.ray_u.direction, COLORS["ray_u"])
        sc.segment(cert.ray_v.origin, cert.ray_v.origin + length * cert.ray_v.direction, COLORS["ray_v"])
        sc.marker(o, COLORS["sector"], name)
        for t in cert.contacts:
            sc.marker(arc.point_at(t), COLORS["contact"])
    return sc.to_svg("support wedges")


def unfolding_figure(arc, cert):
    sc = Scene()
    sec = cert.sector_used
    sc.polyline(arc.vertices, COLORS["ghost"], 1.5, "6,4")
    sc.polyline(cert.original, COLORS["arc"], 2.5)
    sc.polyline(cert.unfolded.vertices, COLORS["unfolded"], 2.5)
    sc.sector(sec.apex, sec.axis_angle, sec.angle, sec.radius, COLORS["sector"], "4,4")
    a0, a1 = sec.axis_angle - sec.half, sec.axis_angle + sec.half
    e0 = sec.apex + sec.radius * unit([math.cos(a0), math.sin(a0)])
    e1 = sec.apex + sec.radius * unit([math.cos(a1), math.sin(a1)])
    sc.segment(e0, e1, COLORS["chord"], 2.0)
    for label, p in zip(cert.labels, cert.unfolded_labelled()):
        sc.marker(p, COLORS["contact"], label)
    sc.marker(sec.apex, COLORS["sector"], "T")
    return sc.to_svg(f"case {cert.case_label} unfolding, bound {cert.bound:.6f}")
