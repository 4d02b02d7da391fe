"""Rigid-motion placement of a polygonal arc inside a circular sector.

For a wedge of angle at most 90 degrees, fixing the orientation of the arc
leaves a single best translation: push both rays onto the arc.  Moving the
apex anywhere else that still contains the arc only moves it backwards into
the reversed cone, which cannot bring any arc point closer.  So the placement
problem collapses to a one-parameter sweep over orientations (for both
mirror images), refined locally around the best grid values and at the
support-change events.  Apex-touch and support-wedge candidates from the
certificate machinery are evaluated alongside, and a compass search over
all three motion parameters polishes whatever is still infeasible.  For an
infeasible arc the minimax optimum can trade a little wedge violation for
less disk violation, so a last sweep solves the translation exactly per
orientation to report the true least violation.
"""

from dataclasses import dataclass, field, replace
import math
import warnings

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import _kernels
from .geometry import PolygonalArc, RigidMotion, angle_of, hull_ccw_indices, hull_corner_indices, rotate_vec
from .support import NotSimple, _corner_start_angle, find_certificates, hull_angle_at

SUCCESS_TOL = 1e-9
GRID_STEP = math.radians(0.25)
N_REFINE = 5
_MIRROR = np.array([1.0, -1.0])

KINDS = ("apex-touch-X1", "apex-touch-Xn", "apex-touch-middle", "wedge-at-U", "wedge-at-V", "refined")


class NonSimpleArcWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class Placement:
    motion: RigidMotion
    violation: float
    candidate_kind: str

    def to_dict(self):
        m = self.motion
        return {
            "rotation": m.rotation,
            "translation": m.translation.tolist(),
            "reflect": m.reflect,
            "violation": self.violation,
            "candidate_kind": self.candidate_kind,
        }


@dataclass(eq=False)
class FitResult:
    success: bool
    placement: Placement
    candidates: list = field(default_factory=list)
    replay: object = None

    @property
    def violation(self):
        return self.placement.violation

    def to_dict(self, with_candidates=False):
        out = {"success": self.success, "violation": self.violation, **self.placement.to_dict()}
        if with_candidates:
            out["candidates"] = [c.to_dict() for c in self.candidates]
        if self.replay is not None:
            out["replay"] = self.replay.to_dict()
        return out


def placement_violation(a, s, motion):
    """Worst sector violation of the moved arc, computed from scratch."""
    return s.max_violation(motion.apply(a.vertices))


def wedge_motion(s, apex, bisector, mirror=False):
    """Motion taking a wedge (apex, bisector angle) in arc coordinates onto ``s``.

    With ``mirror`` the apex and bisector are given in mirrored coordinates
    (``y -> -y``) and the motion reflects first.
    """
    rot = s.axis_angle - bisector
    t = s.apex - rotate_vec(np.asarray(apex, dtype=float), rot)
    return RigidMotion(rot, t, mirror)


def _frame(a, mirror):
    return a.vertices * _MIRROR if mirror else np.array(a.vertices)


def _wedge_violation(pts, s, apex, bisector):
    return float(_kernels.sector_violations(pts, np.asarray(apex, dtype=float), bisector, s.half, s.radius).max())


def _make(a, s, apex, bisector, mirror, kind, pts=None):
    pts = _frame(a, mirror) if pts is None else pts
    motion = wedge_motion(s, apex, bisector, mirror)
    return Placement(motion, _wedge_violation(pts, s, apex, bisector), kind)


def _corner_kind(corners, idx):
    if idx == corners[0]:
        return "apex-touch-X1"
    if idx == corners[-1]:
        return "apex-touch-Xn"
    return "apex-touch-middle"


def _simple_version(a, rng=None):
    if a.is_simple:
        return a
    warnings.warn("arc is not simple; perturbing vertices before certificate search", NonSimpleArcWarning)
    rng = np.random.default_rng(0) if rng is None else rng
    for _ in range(20):
        b = PolygonalArc(a.vertices + rng.uniform(-1e-9, 1e-9, size=a.vertices.shape))
        if b.is_simple:
            return b
    return None


def candidate_placements(a, s):
    """Apex-touch placements for every sharp-enough hull corner plus the support-wedge placements."""
    out = []
    pts = _frame(a, False)
    corners = hull_corner_indices(a)
    for idx in hull_ccw_indices(a.vertices):
        gamma = hull_angle_at(a, idx)
        slack = s.angle - gamma
        if slack < 0.0:
            continue
        start = _corner_start_angle(a, idx)
        n = max(1, int(math.ceil(slack / GRID_STEP)))
        kind = _corner_kind(corners, idx)
        for off in np.linspace(0.0, slack, n + 1):
            out.append(_make(a, s, pts[idx], start - off + s.half, False, kind, pts))

    work = _simple_version(a)
    if work is not None and s.angle < math.pi:
        pair = find_certificates(work, s.angle)
        for cert, kind in ((pair.first, "wedge-at-U"), (pair.second, "wedge-at-V")):
            if cert.is_apex:
                continue
            bis = cert.ray_u.angle + 0.5 * cert.theta
            out.append(_make(a, s, cert.apex, bis, False, kind, pts))
            out.append(_make(a, s, cert.apex * _MIRROR, -bis, True, kind))
    return out


def _event_bisectors(pts, half):
    ccw = hull_ccw_indices(pts)
    m = len(ccw)
    out = []
    for k in range(m):
        e = pts[ccw[(k + 1) % m]] - pts[ccw[k]]
        out.append(angle_of(e) + half)
        out.append(angle_of(-e) - half)
    return np.array(out)


def _profile(pts, s):
    def g(phi):
        apex, md = _kernels.wedge_profile(pts, np.array([phi]), s.half)
        return float(md[0]) - s.radius, apex[0]

    return g


def _local_min(f, centre, half_width):
    # optimise the offset, not the angle: the bounded search's relative
    # tolerance term would otherwise cap accuracy near 1e-8 rad
    res = minimize_scalar(lambda d: f(centre + d)[0], bounds=(-half_width, half_width), method="bounded",
                          options={"xatol": 1e-14, "maxiter": 300})
    return centre + float(res.x)


def sweep(a, s, mirror):
    """Best tight-wedge orientations for one mirror image (sectors up to 90 degrees)."""
    pts = _frame(a, mirror)
    grid = np.arange(0.0, 2.0 * math.pi, GRID_STEP)
    events = _event_bisectors(pts, s.half)
    phis = np.concatenate([grid, events])
    apex, md = _kernels.wedge_profile(pts, phis, s.half)
    g = md - s.radius
    # local minima on the circular grid, plus every event
    gg = g[: len(grid)]
    is_min = (gg <= np.roll(gg, 1)) & (gg <= np.roll(gg, -1))
    order = np.nonzero(is_min)[0]
    order = order[np.argsort(gg[order])][: 2 * N_REFINE]
    f = _profile(pts, s)
    found = []
    for k in order:
        phi = _local_min(f, float(grid[k]), GRID_STEP)
        found.append(phi if f(phi)[0] <= gg[k] else float(grid[k]))
    found.extend(float(x) for x in events)
    out = []
    for phi in found:
        _, ap = f(phi)
        out.append(_make(a, s, ap, phi, mirror, "refined", pts))
    return out


def _compass(a, s, p, step=1e-2, min_step=1e-12, max_evals=6000):
    m = p.motion
    x = np.array([m.rotation, m.translation[0], m.translation[1]])
    pts = a.vertices

    def f(v):
        return s.max_violation(RigidMotion(v[0], v[1:], m.reflect).apply(pts))

    best = f(x)
    evals = 1
    dirs = np.vstack([np.eye(3), -np.eye(3)])
    while step >= min_step and evals < max_evals and best > 0.0:
        improved = False
        for d in dirs:
            y = x + step * d
            fy = f(y)
            evals += 1
            if fy < best:
                x, best, improved = y, fy, True
                break
        if not improved:
            step *= 0.5
    return Placement(RigidMotion(x[0], x[1:], m.reflect), best, p.candidate_kind)


def _best_translation(pts, hull, s, phi):
    """Apex and least violation over all translations at bisector angle ``phi``.

    For a fixed orientation the violation is convex in the apex position, so
    the epigraph form ``min v`` subject to every constraint being at most
    ``v`` is solved to its global optimum by SLSQP.
    """
    lo, hi = phi - s.half, phi + s.half
    n1 = np.array([-math.sin(lo), math.cos(lo)])
    n2 = np.array([math.sin(hi), -math.cos(hi)])
    h1, h2 = float((pts @ n1).min()), float((pts @ n2).min())
    det = n1[0] * n2[1] - n1[1] * n2[0]
    a0 = np.array([(h1 * n2[1] - h2 * n1[1]) / det, (n1[0] * h2 - n2[0] * h1) / det])
    v0 = float(np.hypot(*(hull - a0).T).max()) - s.radius

    def disk(z):
        return z[2] - (np.hypot(*(hull - z[:2]).T) - s.radius)

    cons = [
        {"type": "ineq", "fun": lambda z: z[2] - (n1 @ z[:2] - h1), "jac": lambda z: np.array([-n1[0], -n1[1], 1.0])},
        {"type": "ineq", "fun": lambda z: z[2] - (n2 @ z[:2] - h2), "jac": lambda z: np.array([-n2[0], -n2[1], 1.0])},
        {"type": "ineq", "fun": disk},
    ]
    res = minimize(lambda z: z[2], np.r_[a0, v0], jac=lambda z: np.array([0.0, 0.0, 1.0]),
                   constraints=cons, method="SLSQP", options={"ftol": 1e-15, "maxiter": 200})
    apex = res.x[:2]
    return apex, _wedge_violation(pts, s, apex, phi)


def minimax_sweep(a, s, mirror, step=math.radians(2.0), keep=2):
    """Least-violation placements when the arc does not fit.

    Scans orientations on a grid, solving the translation exactly at each,
    then refines the ``keep`` best grid cells with a bounded scalar search.
    """
    pts = _frame(a, mirror)
    hull = pts[hull_ccw_indices(pts)]
    phis = np.arange(-math.pi, math.pi, step)
    vals = np.array([_best_translation(pts, hull, s, phi)[1] for phi in phis])
    out = []
    for k in np.argsort(vals)[:keep]:
        res = minimize_scalar(lambda t: _best_translation(pts, hull, s, t)[1],
                              bounds=(phis[k] - step, phis[k] + step), method="bounded",
                              options={"xatol": 1e-12})
        phi = float(res.x) if res.fun < vals[k] else float(phis[k])
        apex, _ = _best_translation(pts, hull, s, phi)
        out.append(_make(a, s, apex, phi, mirror, "refined", pts))
    return out


def refine(a, s, p):
    """Local derivative-free improvement of a placement; never returns anything worse."""
    if p.violation <= 0.0:
        return p
    best = p
    if s.angle <= math.pi / 2:
        mirror = p.motion.reflect
        pts = _frame(a, mirror)
        f = _profile(pts, s)
        # bisector of the arc-frame wedge that the motion maps onto the sector axis
        phi0 = s.axis_angle - p.motion.rotation
        phi = _local_min(f, phi0, 4 * GRID_STEP)
        _, ap = f(phi)
        q = _make(a, s, ap, phi, mirror, p.candidate_kind, pts)
        if q.violation < best.violation:
            best = q
    if best.violation > 0.0:
        q = _compass(a, s, best)
        if q.violation < best.violation:
            best = q
    return best


def fit(a, s, diagnose=True):
    """Best placement of ``a`` in ``s``; success iff the violation is at most 1e-9."""
    cands = candidate_placements(a, s)
    if s.angle <= math.pi / 2:
        for mirror in (False, True):
            cands.extend(sweep(a, s, mirror))
    cands.sort(key=lambda c: c.violation)
    best = cands[0]
    if best.violation > SUCCESS_TOL:
        refined = [refine(a, s, c) for c in _distinct(cands, N_REFINE)]
        best = min(refined + [best], key=lambda c: c.violation)
    if best.violation > SUCCESS_TOL:
        swept = [q for mirror in (False, True) for q in minimax_sweep(a, s, mirror)]
        best = min(swept + [best], key=lambda c: c.violation)
    result = FitResult(best.violation <= SUCCESS_TOL, best, cands)
    if not result.success and diagnose:
        from .bounds import replay

        try:
            result.replay = replay(a)
        except (NotSimple, ValueError) as exc:  # diagnostics only
            result.replay = _FailedReplay(str(exc))
    return result


@dataclass(frozen=True)
class _FailedReplay:
    reason: str

    def to_dict(self):
        return {"certificate": False, "reason": self.reason}


def _distinct(cands, k):
    out = []
    for c in cands:
        m = c.motion
        if any(abs(m.rotation - o.motion.rotation) < 1e-9 and m.reflect == o.motion.reflect
               and np.allclose(m.translation, o.motion.translation, atol=1e-9) for o in out):
            continue
        out.append(c)
        if len(out) == k:
            break
    return out


def with_violation(a, s, p):
    """Copy of ``p`` with its violation recomputed from the motion."""
    return replace(p, violation=placement_violation(a, s, p.motion))
