import math
import warnings

import numpy as np
import pytest
from scipy.optimize import minimize

from sectorcover.fitter import (
    SUCCESS_TOL,
    NonSimpleArcWarning,
    Placement,
    RigidMotion,
    candidate_placements,
    fit,
    placement_violation,
    refine,
)
from sectorcover.geometry import PI_SECTOR, PolygonalArc, Sector

from conftest import random_simple_arc


def polar_violation(pts, s):
    """Independent containment check in polar coordinates about the sector apex."""
    w = pts - s.apex
    r = np.hypot(*w.T)
    ang = np.arctan2(w[:, 1], w[:, 0]) - s.axis_angle
    ang = (ang + math.pi) % (2 * math.pi) - math.pi
    out_r = r - s.radius
    out_a = np.where(r > 0, r * np.sin(np.maximum(np.abs(ang) - s.half, 0.0)), 0.0)
    # points behind the apex: use distance to the apex instead of the sine term
    out_a = np.where(np.abs(ang) - s.half > math.pi / 2, r, out_a)
    return float(max(out_r.max(), out_a.max()))


def test_unit_segment_fits_on_a_ray():
    a = PolygonalArc([[0, 0], [1, 0]])
    res = fit(a, PI_SECTOR)
    assert res.success and res.placement.violation <= 0.0
    assert res.placement.candidate_kind.startswith("apex-touch")


def test_v_arc_with_20_degree_corner_has_apex_candidates_at_x1():
    a = PolygonalArc([[0, 0], [1, 0], [0.5 * math.cos(math.radians(20)), 0.5 * math.sin(math.radians(20))]])
    a = a.scaled(1 / a.length)
    kinds = {c.candidate_kind for c in candidate_placements(a, PI_SECTOR)}
    assert "apex-touch-X1" in kinds
    assert {"wedge-at-U", "wedge-at-V"} & kinds or "apex-touch-Xn" in kinds


def test_wedge_candidates_within_unit_distance_fit(rng):
    hits = 0
    for _ in range(100):
        a = random_simple_arc(rng)
        for c in candidate_placements(a, PI_SECTOR):
            if not c.candidate_kind.startswith("wedge"):
                continue
            placed = c.motion(a.vertices)
            if np.hypot(*placed.T).max() <= 1.0:
                hits += 1
                assert c.violation <= 1e-12
    assert hits > 0


def test_stored_violation_matches_recomputation(rng):
    a = random_simple_arc(rng)
    for c in candidate_placements(a, PI_SECTOR):
        assert c.violation == pytest.approx(placement_violation(a, PI_SECTOR, c.motion), abs=1e-12)


def test_refine_returns_fitting_placement_unchanged(rng):
    a = random_simple_arc(rng)
    p = fit(a, PI_SECTOR).placement
    q = Placement(p.motion, -0.01, p.candidate_kind)
    assert refine(a, PI_SECTOR, q) is q


def test_refine_repairs_small_violation(rng):
    done = 0
    for _ in range(40):
        a = random_simple_arc(rng)
        best = fit(a, PI_SECTOR).placement
        m = best.motion
        for step in (1e-3, 2e-3, 4e-3, 8e-3):
            moved = RigidMotion(m.rotation, m.translation - [step, 0.0], m.reflect)
            v = placement_violation(a, PI_SECTOR, moved)
            if v >= 1e-3:
                break
        if not 5e-4 <= v <= 2e-2:
            continue
        out = refine(a, PI_SECTOR, Placement(moved, v, "refined"))
        assert out.violation <= SUCCESS_TOL
        done += 1
    assert done >= 10


def test_oversized_arc_reports_positive_violation():
    a = PolygonalArc([[0, 0], [1.5, 0]])
    res = fit(a, PI_SECTOR)
    assert not res.success
    assert res.placement.violation > 0.1
    assert res.replay is not None
    best = min(res.candidates, key=lambda c: c.violation)
    assert refine(a, PI_SECTOR, best).violation > 0


def segment_oracle(length, s, starts=300, seed=0):
    """Best violation of a straight segment, by multi-start Nelder-Mead over (rotation, tx, ty)."""
    rng = np.random.default_rng(seed)

    def f(z):
        c, si = math.cos(z[0]), math.sin(z[0])
        pts = np.array([[z[1], z[2]], [z[1] + length * c, z[2] + length * si]])
        return s.max_violation(pts)

    best = math.inf
    for _ in range(starts):
        z0 = [rng.uniform(-math.pi, math.pi), rng.uniform(-0.2, 1.0), rng.uniform(-0.3, 0.3)]
        r = minimize(f, z0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        best = min(best, r.fun)
    return best


def test_slightly_long_segment_matches_brute_force():
    a = PolygonalArc([[0, 0], [1.01, 0]])
    res = fit(a, PI_SECTOR)
    oracle = segment_oracle(1.01, PI_SECTOR)
    assert not res.success
    assert res.placement.violation == pytest.approx(oracle, abs=1e-6)
    # first-order estimate: the outward offset gains length 1 + cot(15 deg)
    assert oracle == pytest.approx(0.01 / (1 + 1 / math.tan(math.pi / 12)), rel=0.05)


def test_fit_success_is_sound(rng):
    for _ in range(100):
        a = random_simple_arc(rng)
        res = fit(a, PI_SECTOR)
        assert res.success
        assert polar_violation(res.placement.motion(a.vertices), PI_SECTOR) <= SUCCESS_TOL


def test_scale_monotonicity(rng):
    for _ in range(40):
        a = random_simple_arc(rng)
        assert fit(a, PI_SECTOR).success
        for s in (0.5, 0.9):
            assert fit(a.scaled(s), PI_SECTOR).success


def test_mirror_invariance(rng):
    for _ in range(40):
        a = random_simple_arc(rng, length=rng.uniform(0.9, 1.1))
        assert fit(a, PI_SECTOR).success == fit(a.mirrored(), PI_SECTOR).success


def test_right_angle_baseline_fits_unit_arcs(rng):
    s = Sector.standard(math.pi / 2, 0.5 / math.sin(math.pi / 4))
    for _ in range(40):
        assert fit(random_simple_arc(rng), s).success


def test_non_simple_arc_warns_and_still_scores_original():
    a = PolygonalArc([[0, 0], [0.4, 0], [0.2, 0.2], [0.2, -0.2]])
    with pytest.warns(NonSimpleArcWarning):
        res = fit(a, PI_SECTOR)
    assert res.placement.violation == pytest.approx(
        placement_violation(a, PI_SECTOR, res.placement.motion), abs=1e-12
    )


def test_wide_sector_uses_generic_candidates(rng):
    s = Sector.standard(math.radians(120), 0.6)
    a = random_simple_arc(rng)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        res = fit(a, s)
    assert res.placement.violation == pytest.approx(placement_violation(a, s, res.placement.motion), abs=1e-12)
