import json
from pathlib import Path

import numpy as np
import pytest

from sectorcover.geometry import PolygonalArc

DATA = Path(__file__).parent / "data"


def random_simple_arc(rng, n=None, length=1.0):
    """Random-walk arc rescaled to ``length``; rejects self-intersections."""
    while True:
        k = int(rng.integers(3, 10)) if n is None else n
        steps = rng.normal(size=(k - 1, 2))
        v = np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)])
        a = PolygonalArc(v)
        if a.is_simple:
            return a.scaled(length / a.length)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def case_fixtures():
    raw = json.loads((DATA / "case_fixtures.json").read_text())
    return {k: PolygonalArc(v) for k, v in raw.items()}
