"""Support wedges of a polygonal arc with three alternating contacts.

Given a wedge angle ``theta``, an arc either sits in a ``theta`` wedge with a
hull corner at the apex, or the tightest wedge can be rotated until one ray
lies along a hull edge while the other ray touches the arc at a parameter
strictly between the two edge contacts.  The continuous rotation only
changes its supporting vertices at hull-edge directions, so the search is a
finite sweep over those events.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .geometry import (
    InvalidInput,
    Ray,
    angle_of,
    cross,
    direction,
    hull_ccw_indices,
    hull_corner_indices,
    wrap_angle,
)

CONTACT_TOL = 1e-9
ANGLE_TOL = 1e-10


class NotSimple(InvalidInput):
    """The arc crosses or touches itself."""


@dataclass(frozen=True, eq=False)
class WedgeCertificate:
    """Two support rays at angle ``theta`` plus the contacts that certify them.

    ``ray_v`` is ``ray_u`` turned counter-clockwise by ``theta``.  For a
    three-contact certificate ``contacts`` holds arclength parameters
    ``t1 < t2 < t3`` and ``sides`` says which ray (``"u"``/``"v"``) each
    touches; ``indices`` are the matching vertex indices.  For an apex
    certificate ``apex_touch`` is the vertex index sitting at the apex and the
    contact tuples are empty.
    """

    ray_u: Ray
    ray_v: Ray
    theta: float
    contacts: tuple = ()
    sides: tuple = ()
    indices: tuple = ()
    apex_touch: int = None

    @property
    def is_apex(self):
        return self.apex_touch is not None

    @property
    def apex(self):
        return None if self.theta == 0.0 else self.ray_u.origin

    @property
    def double_side(self):
        return self.sides[0] if self.sides else None

    def ray(self, side):
        return self.ray_u if side == "u" else self.ray_v

    @property
    def double_ray(self):
        return self.ray(self.sides[0])

    @property
    def single_ray(self):
        return self.ray(self.sides[1])

    def transformed(self, motion):
        """Certificate carried by a rigid motion (mirror motions swap the rays)."""
        def move(r):
            o = motion.apply(r.origin)
            d = motion.matrix @ r.direction
            return Ray(o, d / math.hypot(*d))

        u, v = move(self.ray_u), move(self.ray_v)
        sides = self.sides
        if motion.reflect:
            u, v = v, u
            sides = tuple("v" if s == "u" else "u" for s in sides)
        return WedgeCertificate(u, v, self.theta, self.contacts, sides, self.indices, self.apex_touch)

    def to_dict(self):
        return {
            "kind": "apex" if self.is_apex else "three-contact",
            "theta": self.theta,
            "ray_u": {"origin": self.ray_u.origin.tolist(), "direction": self.ray_u.direction.tolist()},
            "ray_v": {"origin": self.ray_v.origin.tolist(), "direction": self.ray_v.direction.tolist()},
            "contacts": list(self.contacts),
            "sides": list(self.sides),
            "indices": list(self.indices),
            "apex_touch": self.apex_touch,
        }


@dataclass(frozen=True, eq=False)
class CertificatePair:
    first: WedgeCertificate
    second: WedgeCertificate
    extra: tuple = field(default=())

    @property
    def apexes(self):
        return self.first.apex, self.second.apex

    def to_dict(self):
        u, v = self.apexes
        return {
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
            "apexes": [None if u is None else u.tolist(), None if v is None else v.tolist()],
        }


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reasons: tuple = ()

    def __bool__(self):
        return self.ok


def _check_theta(theta, allow_zero=False):
    lo_ok = theta >= 0.0 if allow_zero else theta > 0.0
    if not (lo_ok and theta < math.pi):
        raise InvalidInput(f"wedge angle {theta!r} outside (0, pi)")


def _require_simple(a):
    if not a.is_simple:
        raise NotSimple("arc is not simple: two of its segments intersect")


def hull_angle_at(a, index):
    """Interior hull angle at arc vertex ``index`` (must be a hull corner).

    A collinear arc has a two-point hull; its end corners get angle 0.
    """
    ccw = hull_ccw_indices(a.vertices)
    if index not in ccw:
        raise InvalidInput(f"vertex {index} is not a hull corner")
    if len(ccw) == 2:
        return 0.0
    k = ccw.index(index)
    c = a.vertices[index]
    nxt = a.vertices[ccw[(k + 1) % len(ccw)]] - c
    prv = a.vertices[ccw[k - 1]] - c
    return math.atan2(abs(cross(nxt, prv)), float(nxt @ prv))


def _corner_start_angle(a, index):
    """Direction angle of the hull edge leaving ``index`` counter-clockwise."""
    ccw = hull_ccw_indices(a.vertices)
    k = ccw.index(index)
    return angle_of(a.vertices[ccw[(k + 1) % len(ccw)]] - a.vertices[index])


def apex_certificate(a, index, theta, offset=None):
    """Wedge of angle ``theta`` with hull corner ``index`` at its apex.

    ``offset`` in ``[0, theta - hull_angle]`` picks the rotation inside the
    feasible range (default: centred).
    """
    gamma = hull_angle_at(a, index)
    if gamma > theta + ANGLE_TOL:
        raise InvalidInput("hull angle at the corner exceeds the wedge angle")
    slack = max(theta - gamma, 0.0)
    if offset is None:
        offset = 0.5 * slack
    psi = _corner_start_angle(a, index) - offset
    c = a.vertices[index]
    return WedgeCertificate(Ray.from_angle(c, psi), Ray.from_angle(c, psi + theta), theta, apex_touch=int(index))


def tight_wedge(pts, psi, theta):
    """Apex of the tightest ``theta`` wedge whose ``u`` ray points along ``psi``."""
    n1 = np.array([-math.sin(psi), math.cos(psi)])
    n2 = np.array([math.sin(psi + theta), -math.cos(psi + theta)])
    h1 = float((pts @ n1).min())
    h2 = float((pts @ n2).min())
    det = n1[0] * n2[1] - n1[1] * n2[0]
    return np.array([(h1 * n2[1] - h2 * n1[1]) / det, (n1[0] * h2 - n2[0] * h1) / det])


def _strip_rays(pts, psi):
    r = direction(psi)
    n1 = np.array([-r[1], r[0]])
    h1 = float((pts @ n1).min())
    h2 = float((pts @ n1).max())
    s0 = float((pts @ r).min())
    return Ray(s0 * r + h1 * n1, r), Ray(s0 * r + h2 * n1, r)


def _wedge_rays(pts, psi, theta):
    if theta == 0.0:
        return _strip_rays(pts, psi)
    apex = tight_wedge(pts, psi, theta)
    return Ray.from_angle(apex, psi), Ray.from_angle(apex, psi + theta)


def _line_gap(pts, ray):
    """Signed distance of each point from the ray's line (>= 0 on the wedge side)."""
    return cross(ray.direction, (pts - ray.origin).T)


def _alternation(a, on_u, on_v):
    """Pick ``(t1, t2, t3)`` vertex indices realising u-v-u or v-u-v alternation."""
    for dbl, sgl, names in ((on_u, on_v, ("u", "v")), (on_v, on_u, ("v", "u"))):
        if len(dbl) < 2 or not sgl:
            continue
        lo, hi = min(dbl), max(dbl)
        mids = [c for c in sgl if lo < c < hi]
        if mids:
            return (lo, mids[0], hi), (names[0], names[1], names[0])
    return None


def _certificate_at(a, psi, theta):
    pts = a.vertices
    ray_u, ray_v = _wedge_rays(pts, psi, theta)
    # the v ray's wedge side is to its right
    on_u = [int(i) for i in np.nonzero(_line_gap(pts, ray_u) <= CONTACT_TOL)[0]]
    on_v = [int(i) for i in np.nonzero(-_line_gap(pts, ray_v) <= CONTACT_TOL)[0]]
    alt = _alternation(a, on_u, on_v)
    if alt is None:
        return None
    idx, sides = alt
    contacts = tuple(float(a.cumlen[i]) for i in idx)
    return WedgeCertificate(ray_u, ray_v, theta, contacts, sides, idx)


def event_directions(a, theta):
    """Directions of the ``u`` ray at which some ray lies along a hull edge."""
    pts = a.vertices
    ccw = hull_ccw_indices(pts)
    if len(ccw) == 2:
        i, j = ccw
        ccw = [i, j]
        edges = [pts[j] - pts[i], pts[i] - pts[j]]
    else:
        edges = [pts[ccw[(k + 1) % len(ccw)]] - pts[ccw[k]] for k in range(len(ccw))]
    out = []
    for e in edges:
        out.append(wrap_angle(angle_of(e)))
        # a strip is the same for both directions, so one event per edge
        if theta > 0.0:
            out.append(wrap_angle(angle_of(-e) - theta))
    return out


def alternating_wedges(a, theta):
    """All distinct three-contact support wedges of angle ``theta``."""
    found = []
    seen = set()
    for psi in event_directions(a, theta):
        cert = _certificate_at(a, psi, theta)
        if cert is None:
            continue
        key = (cert.indices, cert.sides, round(wrap_angle(cert.ray_u.angle), 9))
        if key in seen:
            continue
        seen.add(key)
        found.append(cert)
    found.sort(key=lambda c: (c.contacts, c.sides))
    return found


def find_certificates(a, theta):
    """Support-wedge certificates at both hull ends of ``a`` for wedge angle ``theta``.

    ``theta == 0`` asks for the parallel support strip with three
    alternating contacts; both slots then hold the same strip certificate.
    """
    _check_theta(theta, allow_zero=True)
    _require_simple(a)
    wedges = alternating_wedges(a, theta)
    if theta == 0.0:
        if not wedges:
            raise InvalidInput("arc has no alternating support strip")
        return CertificatePair(wedges[0], wedges[0], tuple(wedges[1:]))

    corners = hull_corner_indices(a)
    ends = [corners[0], corners[-1]]
    slots = []
    for idx in ends:
        if hull_angle_at(a, idx) <= theta + ANGLE_TOL:
            slots.append(apex_certificate(a, idx, theta))
        else:
            slots.append(None)
    pool = [w for w in wedges if not _touches_apex(a, w)]
    if slots[0] is None and slots[1] is None:
        if not pool:
            raise InvalidInput("no three-contact wedge found")
        first, second = pool[0], pool[-1]
    elif slots[0] is None:
        first, second = (pool[0] if pool else None), slots[1]
    elif slots[1] is None:
        first, second = slots[0], (pool[-1] if pool else None)
    else:
        first, second = slots
    if first is None or second is None:
        raise InvalidInput("no three-contact wedge found")
    used = {id(first), id(second)}
    return CertificatePair(first, second, tuple(w for w in pool if id(w) not in used))


def _touches_apex(a, cert):
    if cert.theta == 0.0:
        return False
    apex = cert.apex
    return any(np.hypot(*(a.vertices[i] - apex)) <= CONTACT_TOL for i in cert.indices)


def verify_certificate(a, cert, theta):
    """Independent check of a certificate; returns a :class:`Verdict` with reason codes."""
    reasons = []
    du, dv = cert.ray_u.direction, cert.ray_v.direction
    got = math.atan2(cross(du, dv), float(du @ dv))
    if abs(got - theta) > ANGLE_TOL or abs(cert.theta - theta) > ANGLE_TOL:
        reasons.append("angle mismatch")
    pts = a.vertices
    if theta > 0.0 and np.hypot(*(cert.ray_u.origin - cert.ray_v.origin)) > CONTACT_TOL:
        reasons.append("rays do not share an apex")
    gu = _line_gap(pts, cert.ray_u)
    gv = -_line_gap(pts, cert.ray_v)
    if gu.min() < -CONTACT_TOL or gv.min() < -CONTACT_TOL:
        reasons.append("arc leaves wedge")
    if cert.is_apex:
        if cert.contacts:
            reasons.append("apex certificate carries contacts")
        if np.hypot(*(pts[cert.apex_touch] - cert.ray_u.origin)) > CONTACT_TOL:
            reasons.append("corner not at apex")
        return Verdict(not reasons, tuple(reasons))

    if len(cert.contacts) != 3 or len(cert.sides) != 3:
        reasons.append("need three contacts")
        return Verdict(False, tuple(reasons))
    for t, side in zip(cert.contacts, cert.sides):
        if cert.ray(side).distance(a.point_at(t)) > CONTACT_TOL:
            reasons.append("contact off ray")
            break
    t1, t2, t3 = cert.contacts
    s1, s2, s3 = cert.sides
    if not (t1 < t2 < t3):
        reasons.append("contacts out of order")
    if not (s1 == s3 != s2):
        reasons.append("contacts do not alternate")
    return Verdict(not reasons, tuple(reasons))


# ---------------------------------------------------------------------------
# contact patterns of a certificate pair
# ---------------------------------------------------------------------------

NOT_APPLICABLE = "not-applicable"


def same_line(r1, r2, tol=CONTACT_TOL):
    if abs(cross(r1.direction, r2.direction)) > tol:
        return False
    return abs(cross(r1.direction, r2.origin - r1.origin)) <= tol


@dataclass(frozen=True)
class ContactPattern:
    """Interlacing pattern of two three-contact certificates.

    ``u_cert``/``v_cert`` are the certificates playing the roles of the wedges
    at ``U`` and ``V``; ``kind`` is ``"shared"`` (a common double line),
    ``"crossed"`` (the spans overlap) or ``"sequential"`` (one span ends
    where or before the other starts).  ``labels`` maps ``A..F`` to
    ``(certificate, contact slot)``.
    """

    kind: str
    u_cert: WedgeCertificate
    v_cert: WedgeCertificate
    labels: dict


def contact_pattern(pair):
    """Match the pair against the interlacing patterns; ``None`` if none fits."""
    c1, c2 = pair.first, pair.second
    if c1.is_apex or c2.is_apex:
        return NOT_APPLICABLE
    if c1 is c2 or (c1.indices == c2.indices and c1.sides == c2.sides):
        return None

    if same_line(c1.double_ray, c2.double_ray):
        if c1.indices[0] != c2.indices[0] or c1.indices[2] != c2.indices[2]:
            return None
        u, v = (c1, c2) if c1.contacts[1] <= c2.contacts[1] else (c2, c1)
        if u.contacts[1] > v.contacts[1]:
            return None
        labels = {"A": (u, 0), "B": (u, 1), "C": (v, 1), "D": (u, 2)}
        return ContactPattern("shared", u, v, labels)

    u, v = (c1, c2) if c1.contacts <= c2.contacts else (c2, c1)
    a, b, c = u.contacts
    d, e, f = v.contacts
    if c <= d:
        labels = {"A": (u, 0), "B": (u, 1), "C": (u, 2), "D": (v, 0), "E": (v, 1), "F": (v, 2)}
        return ContactPattern("sequential", u, v, labels)
    # crossed: A B | C D | E F with A,D on u's double line and C,F on v's
    if a < b <= d < c <= e < f:
        labels = {"A": (u, 0), "B": (u, 1), "C": (v, 0), "D": (u, 2), "E": (v, 1), "F": (v, 2)}
        return ContactPattern("crossed", u, v, labels)
    return None


def interlace(pair):
    """``True``/``False`` for three-contact pairs, :data:`NOT_APPLICABLE` otherwise."""
    pat = contact_pattern(pair)
    if pat == NOT_APPLICABLE:
        return NOT_APPLICABLE
    return pat is not None
