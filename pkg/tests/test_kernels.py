import math
import os
import subprocess
import sys

import numpy as np
import pytest

from sectorcover import _kernels as k

from conftest import random_simple_arc


def test_wedge_profile_paths_agree(rng):
    pts = rng.normal(size=(40, 2))
    phis = rng.uniform(-math.pi, math.pi, 300)
    a0, d0 = k.wedge_profile_numpy(pts, phis, math.pi / 12)
    a1, d1 = k.wedge_profile(pts, phis, math.pi / 12)
    np.testing.assert_allclose(a0, a1, atol=1e-12)
    np.testing.assert_allclose(d0, d1, atol=1e-12)


def test_wedge_profile_contains_points(rng):
    pts = rng.normal(size=(30, 2))
    phis = np.linspace(-3, 3, 50)
    half = math.pi / 12
    apex, far = k.wedge_profile(pts, phis, half)
    for phi, a, r in zip(phis, apex, far):
        v = k.sector_violations(pts, a, phi, half, r)
        assert v.max() <= 1e-9


def test_sector_violations_paths_agree(rng):
    pts = rng.normal(size=(500, 2))
    args = (np.array([0.1, -0.2]), 0.7, 0.3, 1.1)
    np.testing.assert_allclose(k.sector_violations_numpy(pts, *args), k.sector_violations(pts, *args), atol=1e-14)


def test_has_crossing_paths_agree(rng):
    hits = 0
    for _ in range(300):
        v = np.cumsum(rng.normal(size=(int(rng.integers(3, 9)), 2)), axis=0)
        got = k.has_crossing(v, 1e-12)
        assert got == k.has_crossing_numpy(v, 1e-12)
        hits += got
    assert 0 < hits < 300


def test_random_simple_arcs_are_simple(rng):
    a = random_simple_arc(rng, n=8)
    assert not k.has_crossing_numpy(a.vertices, 1e-12)


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, SECTORCOVER_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from sectorcover import _kernels; print(_kernels.USING_NUMBA)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "False"


@pytest.mark.skipif(os.environ.get("SECTORCOVER_DISABLE_NUMBA") == "1", reason="numba disabled")
def test_numba_active_by_default():
    assert k.USING_NUMBA
