"""Independent checks shared by the unit and acceptance suites."""

import math

import numpy as np

from sectorcover.bounds import SectorConfig, lemma2_bound
from sectorcover.geometry import Ray


def _polar(rho, phi):
    return np.stack([rho * np.cos(phi), rho * np.sin(phi)], axis=-1)


def _ray_dist(pts, angle):
    """Distance from each point to the ray from the origin at ``angle``."""
    d = np.array([math.cos(angle), math.sin(angle)])
    t = np.maximum(pts @ d, 0.0)
    return np.hypot(*(pts - t[:, None] * d).T)


def lemma2_violations(part, n, rng, combos=50):
    """Sample ``n`` admissible configurations of chord comparison ``part``.

    Returns ``(worst, checked)`` where ``worst`` is the largest amount by
    which the shortest admissible path undercuts the reported bound.  The
    bound itself comes from :func:`lemma2_bound` on a sample configuration
    for every ``(theta, r)`` combination.
    """
    top = 89.9 if part in (1, 3) else 179.0
    worst, checked = -math.inf, 0
    per = n // combos
    for _ in range(combos):
        theta = math.radians(rng.uniform(1.0, top))
        r = rng.uniform(0.2, 2.0)
        vp = rng.uniform(r, 3 * r, per)
        if part == 1:
            vq = rng.uniform(0, 3 * r, per)
        else:
            vq = rng.uniform(r, 3 * r, per)
        p = _polar(vp, np.zeros(per))
        q = _polar(vq, np.full(per, theta))
        cfg = dict(p=p[0], q=q[0])
        if part in (1, 2):
            length = np.hypot(*(p - q).T)
        else:
            phi_x = rng.uniform(0, theta, per)
            if part == 4:
                phi_x = rng.uniform(0, theta / 2, per)
            x = _polar(rng.uniform(r, 3 * r, per) * (1 + 1e-12), phi_x)
            cfg["x"] = x[0]
            if part == 3:
                length = _ray_dist(x, 0.0) + _ray_dist(x, theta)
            else:
                y = _polar(rng.uniform(r, 3 * r, per) * (1 + 1e-12), rng.uniform(theta / 2, theta, per))
                cfg["y"] = y[0]
                xy = np.hypot(*(x - y).T)
                length = np.minimum(
                    _ray_dist(x, 0.0) + xy + _ray_dist(y, theta),
                    _ray_dist(y, 0.0) + xy + _ray_dist(x, theta),
                )
        sc = SectorConfig(np.zeros(2), Ray.from_angle([0, 0], 0.0), Ray.from_angle([0, 0], theta), r, **cfg)
        bound = lemma2_bound(sc, part)
        worst = max(worst, float((bound - length).max()))
        checked += per
    return worst, checked


def witness_path_length(cert):
    """Shortest path from one terminal ray through both unfolded witnesses to the other."""
    s = cert.sector_used
    r1, r2 = s.rays()
    lab = list(cert.labels)
    x = cert.labelled[lab.index("X")]
    y = cert.labelled[lab.index("Y")]
    xy = math.dist(x, y)
    return min(r1.distance(x) + xy + r2.distance(y), r2.distance(x) + xy + r1.distance(y))
