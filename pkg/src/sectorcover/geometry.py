"""Planar primitives: points, rays, rigid motions, polygonal arcs, sectors.

Points are plain ``float64`` arrays of shape ``(2,)``; everything here is a
pure function or a frozen value object.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math

import numpy as np

from . import _kernels

HULL_COLLINEAR_TOL = 1e-10
SIMPLE_TOL = 1e-12


class InvalidInput(ValueError):
    """Raised when an operation receives geometrically invalid arguments."""


def as_point(p):
    a = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"non-finite point {p!r}")
    return a


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def unit(v):
    v = np.asarray(v, dtype=float)
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise InvalidInput("zero vector has no direction")
    return v / n


def direction(angle):
    return np.array([math.cos(angle), math.sin(angle)])


def angle_of(v):
    return math.atan2(v[1], v[0])


def rotate_vec(v, angle):
    c, s = math.cos(angle), math.sin(angle)
    v = np.asarray(v, dtype=float)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def rotate_about(p, center, angle):
    center = np.asarray(center, dtype=float)
    return center + rotate_vec(np.asarray(p, dtype=float) - center, angle)


def wrap_angle(a):
    """Wrap to ``[-pi, pi)``."""
    return (a + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class Ray:
    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", as_point(self.origin))
        d = as_point(self.direction)
        if abs(math.hypot(*d) - 1.0) > 1e-12:
            raise InvalidInput("ray direction must be a unit vector")
        object.__setattr__(self, "direction", d)

    @classmethod
    def from_angle(cls, origin, angle):
        return cls(origin, direction(angle))

    @property
    def angle(self):
        return angle_of(self.direction)

    def distance(self, p):
        """Euclidean distance from ``p`` to the ray (not the full line)."""
        w = as_point(p) - self.origin
        t = max(0.0, float(w @ self.direction))
        return float(np.hypot(*(w - t * self.direction)))

    def line(self):
        return (self.origin, self.origin + self.direction)


@dataclass(frozen=True)
class RigidMotion:
    """``p -> R(rotation) @ F @ p + translation`` with ``F = diag(1, -1)`` if ``reflect``."""

    rotation: float = 0.0
    translation: np.ndarray = field(default_factory=lambda: np.zeros(2))
    reflect: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rotation", float(self.rotation))
        object.__setattr__(self, "translation", as_point(self.translation))
        object.__setattr__(self, "reflect", bool(self.reflect))

    @property
    def matrix(self):
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        m = np.array([[c, -s], [s, c]])
        if self.reflect:
            m = m @ np.diag([1.0, -1.0])
        return m

    def apply(self, pts):
        pts = np.asarray(pts, dtype=float)
        return pts @ self.matrix.T + self.translation

    __call__ = apply

    def then(self, other):
        """Motion equal to applying ``self`` first and ``other`` second."""
        sign = -1.0 if other.reflect else 1.0
        rot = other.rotation + sign * self.rotation
        trans = other.matrix @ self.translation + other.translation
        return RigidMotion(wrap_angle(rot), trans, self.reflect != other.reflect)

    def inverse(self):
        m_inv = self.matrix.T
        # a reflection matrix is its own inverse; a rotation inverts its angle
        rot = self.rotation if self.reflect else -self.rotation
        return RigidMotion(rot, -(m_inv @ self.translation), self.reflect)

    @classmethod
    def rotation_about(cls, center, angle):
        c = as_point(center)
        return cls(angle, c - rotate_vec(c, angle), False)

    @classmethod
    def reflection_across(cls, line):
        a, b = _line_points(line)
        alpha = angle_of(b - a)
        m = cls(2.0 * alpha, np.zeros(2), True)
        return cls(2.0 * alpha, a - m.apply(a), True)


def _line_points(line):
    a, b = as_point(line[0]), as_point(line[1])
    if np.allclose(a, b, rtol=0.0, atol=1e-15):
        raise InvalidInput("degenerate line: defining points coincide")
    return a, b


def reflect(p, line):
    """Mirror image of ``p`` (or an ``(n, 2)`` array) across the line through two points."""
    a, b = _line_points(line)
    d = unit(b - a)
    w = np.asarray(p, dtype=float) - a
    along = w @ d
    foot = a + np.multiply.outer(along, d)
    return 2.0 * foot - np.asarray(p, dtype=float)


def line_intersection(l1, l2, tol=1e-15):
    a, b = _line_points(l1)
    c, d = _line_points(l2)
    r, s = b - a, d - c
    den = cross(r, s)
    if abs(den) <= tol * max(1.0, np.hypot(*r) * np.hypot(*s)):
        return None
    t = cross(c - a, s) / den
    return a + t * r


def compose_reflections(l1, l2):
    """Reflection in ``l1`` followed by reflection in ``l2``.

    For lines meeting at angle ``phi`` this is a rotation by ``2 phi`` about
    their intersection; for parallel lines it is a translation by twice the
    offset between them.
    """
    a1, b1 = _line_points(l1)
    a2, b2 = _line_points(l2)
    x = line_intersection((a1, b1), (a2, b2))
    if x is None:
        d = unit(b1 - a1)
        w = a2 - a1
        offset = w - (w @ d) * d
        return RigidMotion(0.0, 2.0 * offset, False)
    phi = angle_of(b2 - a2) - angle_of(b1 - a1)
    return RigidMotion.rotation_about(x, wrap_angle(2.0 * phi))


@dataclass(frozen=True, eq=False)
class PolygonalArc:
    """Ordered vertex list parametrised by cumulative arclength."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 2:
            raise InvalidInput("an arc needs at least two 2-D vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidInput("arc vertices must be finite")
        seg = np.hypot(*np.diff(v, axis=0).T)
        if np.any(seg == 0.0):
            raise InvalidInput("consecutive vertices must be distinct")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        cum.setflags(write=False)
        object.__setattr__(self, "cumlen", cum)

    def __len__(self):
        return len(self.vertices)

    @property
    def length(self):
        return float(self.cumlen[-1])

    @property
    def segment_lengths(self):
        return np.diff(self.cumlen)

    @cached_property
    def is_simple(self):
        return not _kernels.has_crossing(self.vertices, SIMPLE_TOL)

    def point_at(self, t):
        """Point at arclength parameter ``t`` in ``[0, length]``."""
        t = min(max(float(t), 0.0), self.length)
        k = int(np.searchsorted(self.cumlen, t, side="right")) - 1
        k = min(k, len(self.vertices) - 2)
        s = (t - self.cumlen[k]) / (self.cumlen[k + 1] - self.cumlen[k])
        return self.vertices[k] + s * (self.vertices[k + 1] - self.vertices[k])

    def transformed(self, motion):
        return PolygonalArc(motion.apply(self.vertices))

    def reversed(self):
        return PolygonalArc(self.vertices[::-1])

    def mirrored(self):
        return PolygonalArc(self.vertices * np.array([1.0, -1.0]))

    def scaled(self, s):
        return PolygonalArc(self.vertices * float(s))


def arc_length(a):
    return a.length


def _collinear_eps(pts):
    span = float(np.ptp(pts, axis=0).max()) if len(pts) else 1.0
    return HULL_COLLINEAR_TOL * max(span, 1e-300) ** 2


def hull_ccw_indices(pts):
    """Indices of strict convex-hull corners in counter-clockwise order.

    Monotone chain; a vertex whose turn is within the collinearity tolerance
    is not a corner.  A fully collinear input yields its two extreme points.
    """
    pts = np.asarray(pts, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    eps = _collinear_eps(pts)

    def chain(idx):
        out = []
        for i in idx:
            while len(out) >= 2:
                o, a = pts[out[-2]], pts[out[-1]]
                if cross(a - o, pts[i] - o) <= eps:
                    out.pop()
                else:
                    break
            out.append(int(i))
        return out

    lower = chain(order)
    upper = chain(order[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return [int(order[0]), int(order[-1])]
    return hull


def hull_corner_indices(a):
    """Arc-vertex indices of the hull corners, in parametric order."""
    return sorted(hull_ccw_indices(a.vertices))


def hull_corners(a):
    return [a.vertices[i].copy() for i in hull_corner_indices(a)]


@dataclass(frozen=True)
class Sector:
    apex: np.ndarray
    axis: np.ndarray
    angle: float
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "apex", as_point(self.apex))
        object.__setattr__(self, "axis", unit(as_point(self.axis)))
        if not 0.0 < self.angle < math.pi:
            raise InvalidInput("sector angle must lie in (0, pi)")
        if not self.radius > 0.0:
            raise InvalidInput("sector radius must be positive")
        object.__setattr__(self, "angle", float(self.angle))
        object.__setattr__(self, "radius", float(self.radius))

    @classmethod
    def standard(cls, angle, radius=1.0):
        """Sector with apex at the origin, bisector along +x."""
        return cls(np.zeros(2), np.array([1.0, 0.0]), angle, radius)

    @property
    def half(self):
        return 0.5 * self.angle

    @property
    def axis_angle(self):
        return angle_of(self.axis)

    @property
    def area(self):
        return 0.5 * self.angle * self.radius**2

    def rays(self):
        a = self.axis_angle
        return Ray.from_angle(self.apex, a - self.half), Ray.from_angle(self.apex, a + self.half)

    def violations(self, pts):
        return _kernels.sector_violations(
            np.atleast_2d(np.asarray(pts, dtype=float)), self.apex, self.axis_angle, self.half, self.radius
        )

    def max_violation(self, pts):
        """Worst violation over a polyline.

        Each constraint is convex along a segment, so checking the vertices is
        exact for the whole polyline.
        """
        return float(self.violations(pts).max())


PI_SECTOR = Sector.standard(math.pi / 6.0, 1.0)


def sector_contains(s, p):
    """Signed violation of ``p`` against the closed sector ``s`` (``<= 0`` inside)."""
    return float(s.violations(as_point(p))[0])


def chord_length(radius, angle):
    if not radius > 0.0:
        raise InvalidInput("radius must be positive")
    if not 0.0 < angle <= math.pi:
        raise InvalidInput("chord angle must lie in (0, pi]")
    return 2.0 * radius * math.sin(0.5 * angle)
