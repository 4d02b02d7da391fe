"""Time the compiled kernels against their numpy versions.

    python benchmarks/bench_kernels.py [--repeat N]

Compile time is excluded: every kernel runs once before timing.  A second
section times a short fitting run in a fresh process per backend, selected
with ``SECTORCOVER_DISABLE_NUMBA``.
"""

import argparse
import math
import os
import subprocess
import sys
import timeit

import numpy as np

from sectorcover import _kernels as k

FIT_SNIPPET = """
import time
from sectorcover import _kernels
from sectorcover.fitter import fit
from sectorcover.geometry import PI_SECTOR
from sectorcover.harness import mixed_corpus
arcs = mixed_corpus(200, seed=1)
fit(arcs[0], PI_SECTOR)
t = time.perf_counter()
for a in arcs:
    fit(a, PI_SECTOR, diagnose=False)
print(_kernels.USING_NUMBA, time.perf_counter() - t)
"""


def _time(fn, repeat):
    fn()
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_table(repeat):
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(20, 2))
    phis = np.linspace(-math.pi, math.pi, 1440)
    many = rng.normal(size=(100_000, 2))
    walk = np.cumsum(rng.normal(size=(20, 2)), axis=0)
    cases = [
        ("wedge_profile (20 pts x 1440 dirs)", lambda: k.wedge_profile_numpy(pts, phis, 0.26),
         lambda: k.wedge_profile(pts, phis, 0.26)),
        ("sector_violations (1e5 pts)", lambda: k.sector_violations_numpy(many, np.zeros(2), 0.0, 0.26, 1.0),
         lambda: k.sector_violations(many, np.zeros(2), 0.0, 0.26, 1.0)),
        ("has_crossing (20 vertices)", lambda: k.has_crossing_numpy(walk, 1e-12),
         lambda: k.has_crossing(walk, 1e-12)),
    ]
    print(f"active backend: {'numba' if k.USING_NUMBA else 'numpy'}")
    print(f"{'kernel':40s} {'numpy ms':>10s} {'active ms':>10s} {'speedup':>8s}")
    for name, slow, fast in cases:
        a, b = _time(slow, repeat) * 1e3, _time(fast, repeat) * 1e3
        print(f"{name:40s} {a:10.3f} {b:10.3f} {a / b:8.1f}x")


def fit_table():
    print("\n200 mixed unit arcs fitted into the 30 deg unit sector:")
    for flag in ("0", "1"):
        env = dict(os.environ, SECTORCOVER_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", FIT_SNIPPET], env=env, capture_output=True, text=True, check=True)
        numba, secs = out.stdout.split()
        print(f"  {'numba' if numba == 'True' else 'numpy':6s} {float(secs):7.2f} s")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=20)
    args = p.parse_args()
    kernel_table(args.repeat)
    fit_table()


if __name__ == "__main__":
    main()
