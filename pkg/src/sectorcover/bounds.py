"""Chord-comparison length bounds and the reflection-unfolding replay.

The replay takes the two 30 degree support wedges of an arc (apexes ``U``
and ``V``), labels their six contacts ``A..F``, reflects pieces of the
polysegment through those contacts across the support lines, and checks
that the result runs from one ray of a single sector to the other while
passing two far witness points.  The chord of that sector is then a lower
bound on the arc length.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .geometry import (
    InvalidInput,
    PolygonalArc,
    RigidMotion,
    Ray,
    Sector,
    as_point,
    chord_length,
    cross,
    unit,
)
from .support import (
    CONTACT_TOL,
    NOT_APPLICABLE,
    contact_pattern,
    find_certificates,
)

REPLAY_THETA = math.pi / 6.0
BOUND_SLACK = 1e-12
_ON_RAY_TOL = 1e-9
_BISECTOR_TOL = 1e-12


class PreconditionError(InvalidInput):
    """A chord-comparison bound was requested outside its hypotheses."""


class ClassificationError(RuntimeError):
    """A certificate pair matched none of the four contact cases."""


# ---------------------------------------------------------------------------
# chord comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectorConfig:
    """Apex ``V``, rays towards ``A`` and ``B``, radius, arc ends and witnesses."""

    apex: np.ndarray
    ray_a: Ray
    ray_b: Ray
    radius: float
    p: np.ndarray
    q: np.ndarray
    x: np.ndarray = None
    y: np.ndarray = None

    @property
    def theta(self):
        da, db = self.ray_a.direction, self.ray_b.direction
        return math.atan2(abs(cross(da, db)), float(da @ db))

    @property
    def bisector(self):
        return unit(self.ray_a.direction + self.ray_b.direction)


def sine_superadditive(alpha, beta):
    """``sin a + sin b > sin(a + b)`` on the open quarter-turn square."""
    if not (0.0 < alpha < math.pi / 2 and 0.0 < beta < math.pi / 2):
        raise PreconditionError("angles must lie in (0, 90 deg)")
    return math.sin(alpha) + math.sin(beta) > math.sin(alpha + beta)


def _in_wedge(cfg, w):
    d = w - cfg.apex
    da, db = cfg.ray_a.direction, cfg.ray_b.direction
    s = 1.0 if cross(da, db) >= 0 else -1.0
    return s * cross(da, d) >= -_ON_RAY_TOL and s * cross(d, db) >= -_ON_RAY_TOL


def _outside(cfg, w, strict):
    r = float(np.hypot(*(w - cfg.apex)))
    return r > cfg.radius if strict else r >= cfg.radius


def lemma2_bound(cfg, part, strict=True):
    """Lower bound guaranteed by chord comparison part ``part`` (1-4).

    Parts 1 and 3 give ``r sin(theta)`` (the distance from ``A`` to its foot
    on ray ``VB``); parts 2 and 4, and part 3 with the witness on the
    bisector, give the chord ``2 r sin(theta / 2)``.  With ``strict=False``
    points exactly on the circle count as outside (the bound then holds
    non-strictly, by continuity).
    """
    if part not in (1, 2, 3, 4):
        raise PreconditionError(f"unknown part {part!r}")
    v = as_point(cfg.apex)
    p, q = as_point(cfg.p), as_point(cfg.q)
    if cfg.ray_a.distance(p) > _ON_RAY_TOL:
        raise PreconditionError("P is not on ray VA")
    if cfg.ray_b.distance(q) > _ON_RAY_TOL:
        raise PreconditionError("Q is not on ray VB")
    theta, r = cfg.theta, cfg.radius
    if part in (1, 3) and not theta < math.pi / 2:
        raise PreconditionError("theta must be below 90 deg")
    if part in (2, 4) and not theta < math.pi:
        raise PreconditionError("theta must be below 180 deg")

    if part == 1:
        if not _outside(cfg, p, strict):
            raise PreconditionError("P is inside the sector")
        return r * math.sin(theta)
    if part == 2:
        dp, dq = np.hypot(*(p - v)), np.hypot(*(q - v))
        if min(dp, dq) < r or (strict and max(dp, dq) <= r):
            raise PreconditionError("P and Q must lie outside the sector")
        return chord_length(r, theta)

    x = None if cfg.x is None else as_point(cfg.x)
    if x is None:
        raise PreconditionError("witness X required")
    if not (_in_wedge(cfg, x) and _outside(cfg, x, strict)):
        raise PreconditionError("X must lie in the wedge beyond the radius")
    sx = cross(cfg.bisector, x - v)
    if part == 3:
        if abs(sx) <= 1e-12 * max(1.0, r):
            return chord_length(r, theta)
        return r * math.sin(theta)

    y = None if cfg.y is None else as_point(cfg.y)
    if y is None:
        raise PreconditionError("witness Y required")
    if not (_in_wedge(cfg, y) and _outside(cfg, y, strict)):
        raise PreconditionError("Y must lie in the wedge beyond the radius")
    sy = cross(cfg.bisector, y - v)
    if not strict:
        eps = _BISECTOR_TOL * max(1.0, r)
        sx = 0.0 if abs(sx) <= eps else sx
        sy = 0.0 if abs(sy) <= eps else sy
    if (sx * sy >= 0.0) if strict else (sx * sy > 0.0):
        raise PreconditionError("X and Y must lie on opposite sides of the bisector")
    return chord_length(r, theta)


# ---------------------------------------------------------------------------
# case classification
# ---------------------------------------------------------------------------

LINE_NAMES = ("U-double", "U-single", "V-double", "V-single")


@dataclass(frozen=True, eq=False)
class ContactLabeling:
    """Contacts ``A..F`` (``A..D`` in case 1) with their lines and the case number."""

    case_label: int
    u: np.ndarray
    v: np.ndarray
    params: dict
    points: dict
    lines: dict
    u_cert: object
    v_cert: object

    def line_through(self, label):
        name = self.lines[label]
        return self.u if name.startswith("U") else self.v


def _line_name(owner, cert, slot):
    side = cert.sides[slot]
    kind = "double" if side == cert.double_side else "single"
    return f"{owner}-{kind}"


def classify_case(pair, arc=None):
    """Label the contacts of an interlacing pair with a case number 1-4."""
    pat = contact_pattern(pair)
    if pat == NOT_APPLICABLE:
        raise ClassificationError("an apex certificate has no contact case")
    if pat is None:
        raise ClassificationError("contact orderings match none of the four cases")
    u_cert, v_cert = pat.u_cert, pat.v_cert
    u, v = u_cert.apex, v_cert.apex
    params, points, lines = {}, {}, {}
    for label, (cert, slot) in pat.labels.items():
        owner = "U" if cert is u_cert else "V"
        params[label] = cert.contacts[slot]
        idx = cert.indices[slot]
        points[label] = (arc.vertices[idx] if arc is not None else cert.ray(cert.sides[slot]).origin).copy()
        lines[label] = _line_name(owner, cert, slot)

    if pat.kind == "shared":
        case = 1
        expect = {"A": "U-double", "B": "U-single", "C": "V-single", "D": "U-double"}
        lines["C"] = "V-single"
    elif pat.kind == "crossed":
        case = 2
        expect = {"A": "U-double", "B": "U-single", "C": "V-double", "D": "U-double",
                  "E": "V-single", "F": "V-double"}
    else:
        sc = cross(v - u, points["C"] - u)
        sd = cross(v - u, points["D"] - u)
        tol = CONTACT_TOL * max(1.0, float(np.hypot(*(v - u))))
        case = 3 if (sc * sd > 0.0 or abs(sc) <= tol or abs(sd) <= tol) else 4
        expect = {"A": "U-double", "B": "U-single", "C": "U-double", "D": "V-double",
                  "E": "V-single", "F": "V-double"}
    for label, name in expect.items():
        if lines[label] != name:
            raise ClassificationError(f"contact {label} sits on {lines[label]}, expected {name}")
    return ContactLabeling(case, u.copy(), v.copy(), params, points, lines, u_cert, v_cert)


# ---------------------------------------------------------------------------
# unfolding
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LengthCertificate:
    case_label: int
    transcript: tuple
    unfolded: PolygonalArc
    bound: float
    sector_used: Sector
    original: np.ndarray
    labels: tuple
    witness_distances: tuple = ()
    details: dict = field(default_factory=dict)
    labelled: np.ndarray = None

    def unfolded_labelled(self):
        """Unfolded position of every label, including coincident ones."""
        return self.labelled

    @property
    def original_length(self):
        return float(np.hypot(*np.diff(self.original, axis=0).T).sum())

    def to_dict(self):
        s = self.sector_used
        return {
            "case_label": self.case_label,
            "bound": self.bound,
            "transcript": list(self.transcript),
            "labels": list(self.labels),
            "original": self.original.tolist(),
            "unfolded": self.labelled.tolist(),
            "sector_used": {
                "apex": s.apex.tolist(),
                "axis": s.axis.tolist(),
                "angle": s.angle,
                "radius": s.radius,
            },
            "witness_distances": list(self.witness_distances),
            **{k: v for k, v in self.details.items()},
        }


class _Unfolder:
    """Tracks, per label, the isometry applied so far."""

    def __init__(self, points):
        self.orig = {k: np.asarray(p, dtype=float).copy() for k, p in points.items()}
        self.maps = {k: RigidMotion() for k in points}
        self.transcript = []

    def cur(self, label):
        return self.maps[label].apply(self.orig[label])

    def reflect(self, labels, a, b, pivot_names):
        m = RigidMotion.reflection_across((a, b))
        for k in labels:
            self.maps[k] = self.maps[k].then(m)
        self.transcript.append({
            "op": "reflect",
            "line": [np.asarray(a).tolist(), np.asarray(b).tolist()],
            "through": list(pivot_names),
            "moves": list(labels),
        })
        return m


_ORDER = {1: ("A", "X", "B", "C", "Y", "D"), 2: tuple("AXBCDEYF"), 3: tuple("AXBCDEYF"), 4: tuple("AXBCDEYF")}


def _run_case(case, lab, pts):
    """Apply the case's reflection sequence; returns (unfolder, terminal apex, aux points)."""
    u, v = lab.u, lab.v
    uf = _Unfolder(pts)
    aux = {"U": u, "V": v}
    if case == 1:
        m1 = uf.reflect(["A", "X"], u, uf.cur("B"), ("U", "B"))
        v_img = m1.apply(v)
        uf.reflect(["Y", "D"], v, uf.cur("C"), ("V", "C"))
        terminal = v_img
        aux["V'"] = v_img
    elif case in (2, 4):
        first = ["C", "D", "E", "Y", "F"]
        m1 = uf.reflect(first, u, uf.cur("B"), ("U", "B"))
        pivot = "D" if case == 2 else "C"
        moved = ["E", "Y", "F"] if case == 2 else ["D", "E", "Y", "F"]
        m2 = uf.reflect(moved, u, uf.cur(pivot), ("U", pivot + "'"))
        v_rot = m2.apply(m1.apply(v))
        aux["V'"] = v_rot
        uf.transcript.append({"op": "rotate", "center": u.tolist(), "point": "V", "image": v_rot.tolist()})
        uf.reflect(["Y", "F"], v_rot, uf.cur("E"), ("V'", "E''"))
        terminal = v
    elif case == 3:
        m1 = uf.reflect(["X", "B"], u, uf.cur("A"), ("U", "A"))
        m2 = uf.reflect(["A", "X"], u, uf.cur("B"), ("U", "B'"))
        v_rot = m2.apply(m1.apply(v))
        aux["V'"] = v_rot
        uf.transcript.append({"op": "rotate", "center": u.tolist(), "point": "V", "image": v_rot.tolist()})
        uf.reflect(["E", "Y"], v, uf.cur("F"), ("V", "F"))
        uf.reflect(["Y", "F"], v, uf.cur("E"), ("V", "E'"))
        terminal = v_rot
    else:
        raise ClassificationError(f"unknown case {case}")
    return uf, terminal, aux


def _angle_at(apex, p, q):
    a, b = p - apex, q - apex
    return math.atan2(abs(cross(a, b)), float(a @ b))


def _witness_candidates(arc, lo, hi, end_param, end_point, motion, end_image, terminal, before):
    """Images of every admissible witness vertex in the unfolded frame.

    Vertices beyond the end contact (``before`` selects which side) are
    replaced by the end contact slid outwards along the terminal ray by the
    straight-line gap, which never lengthens the polysegment and never brings
    the witness closer to the terminal apex.
    """
    out = []
    out_dir = unit(end_image - terminal)
    for k in range(len(arc)):
        t = arc.cumlen[k]
        if t < lo - 1e-15 or t > hi + 1e-15:
            continue
        p = arc.vertices[k]
        beyond = t < end_param if before else t > end_param
        if beyond:
            gap = float(np.hypot(*(p - end_point)))
            src = end_point + gap * unit(end_point - motion.inverse().apply(terminal))
            img = end_image + gap * out_dir
        else:
            src, img = p.copy(), motion.apply(p)
        out.append((k, beyond, src, img))
    return out


def unfold(arc, pair, labeling):
    """Replay the case's reflections and certify a chord lower bound.

    Returns ``(certificate, reason)``; ``certificate`` is ``None`` when the
    witness or chord-comparison hypotheses fail, with ``reason`` saying why.
    """
    case = labeling.case_label
    u, v = labeling.u, labeling.v
    order = _ORDER[case]
    last_pivot = "C" if case == 1 else "E"
    end_label = "D" if case == 1 else "F"

    pts = {k: labeling.points[k] for k in order if k not in ("X", "Y")}
    pts["X"] = pts["A"].copy()
    pts["Y"] = pts[end_label].copy()
    uf, terminal, aux = _run_case(case, labeling, pts)
    mx, my = uf.maps["X"], uf.maps["Y"]
    # the mirror that separates X from A (case 3) fixes A, so X's map agrees on it
    start = mx.apply(pts["A"])
    end = my.apply(pts[end_label])
    if min(np.hypot(*(start - terminal)), np.hypot(*(end - terminal))) <= CONTACT_TOL:
        return None, "unfolded endpoint at the terminal apex"
    phi = _angle_at(terminal, start, end)
    if not 0.0 < phi < math.pi:
        return None, "terminal angle outside (0, 180 deg)"
    ray_a = Ray(terminal, unit(start - terminal))
    ray_b = Ray(terminal, unit(end - terminal))
    probe = SectorConfig(terminal, ray_a, ray_b, 1.0, start, end)
    bis = probe.bisector

    def score(cands):
        best = {}
        for k, beyond, src, img in cands:
            if not _in_wedge(probe, img):
                continue
            s = cross(bis, img - terminal)
            d = float(np.hypot(*(img - terminal)))
            side = 0 if abs(s) <= _BISECTOR_TOL * max(1.0, d) else (1 if s > 0 else -1)
            for sd in ((-1, 1) if side == 0 else (side,)):
                if sd not in best or d > best[sd][0]:
                    best[sd] = (d, k, beyond, src, img)
        return best

    xs = score(_witness_candidates(arc, 0.0, labeling.params["B"], labeling.params["A"], pts["A"], mx,
                                   start, terminal, before=True))
    ys = score(_witness_candidates(arc, labeling.params[last_pivot], arc.length, labeling.params[end_label],
                                   pts[end_label], my, end, terminal, before=False))
    choice = None
    for sx in (-1, 1):
        if sx in xs and -sx in ys:
            rho = min(xs[sx][0], ys[-sx][0])
            if choice is None or rho > choice[0]:
                choice = (rho, xs[sx], ys[-sx])
    if choice is None or choice[0] <= 1.0:
        return None, "witness condition failed (no admissible pair of points beyond unit distance)"
    rho, wx, wy = choice

    shifted = dict(pts)
    notes = []
    shifted["X"] = wx[3]
    if wx[2]:
        shifted["A"] = wx[3]
        notes.append("X before A: start slid outwards")
    shifted["Y"] = wy[3]
    if wy[2]:
        shifted[end_label] = wy[3]
        notes.append("Y after the end contact: end slid outwards")
    if notes:
        uf.transcript.append({"op": "shift", "notes": notes})
    uf.maps["A"] = mx
    uf.maps[end_label] = my

    original = np.array([shifted[k] for k in order])
    unfolded_pts = np.array([uf.maps[k].apply(shifted[k]) for k in order])
    img = dict(zip(order, unfolded_pts))
    rho = min(float(np.hypot(*(img["X"] - terminal))), float(np.hypot(*(img["Y"] - terminal))))
    cfg = SectorConfig(terminal, ray_a, ray_b, rho, img["A"], img[end_label], img["X"], img["Y"])
    try:
        bound = lemma2_bound(cfg, 4, strict=False)
    except PreconditionError as exc:
        return None, f"chord comparison not applicable: {exc}"

    sector = Sector(terminal, bis, phi, rho)
    keep = [0] + [i for i in range(1, len(unfolded_pts))
                  if np.hypot(*(unfolded_pts[i] - unfolded_pts[i - 1])) > 0.0]
    cert = LengthCertificate(
        case_label=case,
        transcript=tuple(uf.transcript),
        unfolded=PolygonalArc(unfolded_pts[keep]),
        bound=bound,
        sector_used=sector,
        original=original,
        labels=order,
        witness_distances=(float(np.hypot(*(wx[4] - terminal))), float(np.hypot(*(wy[4] - terminal)))),
        details={
            "terminal_angle": phi,
            "U": u.tolist(),
            "V": v.tolist(),
            "witness_vertices": [wx[1], wy[1]],
            "aux": {k: np.asarray(p).tolist() for k, p in aux.items()},
        },
        labelled=unfolded_pts,
    )
    return cert, None


def _alpha_beta(lab):
    u, v = lab.u, lab.v
    end = "F"
    alpha = _angle_at(v, lab.points["A"], u)
    beta = _angle_at(u, lab.points[end], v)
    return alpha, beta


@dataclass(frozen=True, eq=False)
class ReplayOutcome:
    certificate: LengthCertificate = None
    reason: str = None
    pair: object = None
    labeling: ContactLabeling = None
    reversed: bool = False

    def to_dict(self):
        out = {
            "certificate": self.certificate is not None,
            "reason": self.reason,
            "reversed": self.reversed,
            "pair": None if self.pair is None else self.pair.to_dict(),
            "case_label": None if self.labeling is None else self.labeling.case_label,
        }
        if self.certificate is not None:
            out.update(self.certificate.to_dict())
        return out


def _contacts_hit_apex(pair, arc):
    for cert, other in ((pair.first, pair.second), (pair.second, pair.first)):
        for idx in cert.indices:
            for apex in (cert.apex, other.apex):
                if apex is not None and np.hypot(*(arc.vertices[idx] - apex)) <= CONTACT_TOL:
                    return True
    return False


def replay(arc, theta=REPLAY_THETA):
    """Run the full contradiction pipeline and report how far it got."""
    if not arc.is_simple:
        from .support import NotSimple

        raise NotSimple("arc is not simple")
    pair = find_certificates(arc, theta)
    if pair.first.is_apex or pair.second.is_apex:
        return ReplayOutcome(None, "apex-touch certificate: the arc fits a wedge with a hull corner at the apex", pair)
    if _contacts_hit_apex(pair, arc):
        return ReplayOutcome(None, "a contact touches a wedge apex", pair)
    try:
        lab = classify_case(pair, arc)
    except ClassificationError as exc:
        return ReplayOutcome(None, f"classification failed: {exc}", pair)
    flipped = False
    if lab.case_label in (2, 4):
        alpha, beta = _alpha_beta(lab)
        if alpha < beta:
            rev = arc.reversed()
            rpair = find_certificates(rev, theta)
            try:
                rlab = classify_case(rpair, rev)
            except ClassificationError as exc:
                return ReplayOutcome(None, f"classification failed after reversal: {exc}", rpair)
            arc, pair, lab, flipped = rev, rpair, rlab, True
    cert, reason = unfold(arc, pair, lab)
    if cert is None:
        return ReplayOutcome(None, reason, pair, lab, flipped)
    if not cert.bound - BOUND_SLACK > 1.0:
        return ReplayOutcome(None, f"bound {cert.bound:.12g} does not exceed 1", pair, lab, flipped)
    return ReplayOutcome(cert, None, pair, lab, flipped)


def replay_contradiction(arc):
    """Length certificate proving ``arc`` is longer than 1, or ``None``."""
    return replay(arc).certificate
