"""Arc families, baseline covers, and Monte Carlo fitting campaigns."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
import math
import os
import time

import numpy as np

from .geometry import InvalidInput, PolygonalArc, Sector
from .fitter import SUCCESS_TOL, fit

KINDS = ("segment", "random-walk", "circular-polyline", "L-bracket", "Z-shape", "spiral", "zigzag", "convex-arc")
MAX_RETRIES = 100
PI_AREA_BOUNDS = (0.2322, 0.2709)


@dataclass(frozen=True)
class ArcFamily:
    """A generator recipe.  Numeric params may be ``[lo, hi]`` ranges, drawn per arc."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_dict(self):
        return {"kind": self.kind, "params": dict(self.params), "seed": int(self.seed)}

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, str):
            return cls(d)
        return cls(d["kind"], dict(d.get("params", {})), int(d.get("seed", 0)))


def _draw(rng, value, integer=False):
    if isinstance(value, (list, tuple)):
        lo, hi = value
        return int(rng.integers(lo, hi + 1)) if integer else float(rng.uniform(lo, hi))
    return int(value) if integer else float(value)


def _normalise(v):
    v = np.asarray(v, dtype=float)
    v = v - v[0]
    seg = np.hypot(*np.diff(v, axis=0).T)
    keep = np.concatenate([[True], seg > 1e-12 * max(1.0, seg.max())])
    v = v[keep]
    a = PolygonalArc(v)
    return PolygonalArc(v / a.length)


def _walk(rng, n, spread):
    turns = rng.normal(0.0, spread, size=n - 1)
    heading = np.cumsum(turns) + rng.uniform(0, 2 * math.pi)
    steps = rng.uniform(0.2, 1.0, size=n - 1)
    d = np.stack([np.cos(heading), np.sin(heading)], axis=1) * steps[:, None]
    return np.vstack([[0.0, 0.0], np.cumsum(d, axis=0)])


def _convex(rng, n, total):
    w = rng.uniform(0.2, 1.0, size=n - 2)
    turns = total * w / w.sum() if n > 2 else np.zeros(0)
    heading = np.concatenate([[0.0], np.cumsum(turns)])
    steps = rng.uniform(0.3, 1.0, size=n - 1)
    d = np.stack([np.cos(heading), np.sin(heading)], axis=1) * steps[:, None]
    return np.vstack([[0.0, 0.0], np.cumsum(d, axis=0)])


def _build(kind, p, rng, attempt):
    if kind == "segment":
        return np.array([[0.0, 0.0], [1.0, 0.0]])
    if kind == "random-walk":
        n = _draw(rng, p.get("n_vertices", [2, 20]), integer=True)
        if n < 2:
            raise InvalidInput("random-walk needs at least 2 vertices")
        spread = _draw(rng, p.get("spread", 1.5))
        # narrow the turn distribution after each block of failed draws
        spread *= 0.5 ** (attempt // MAX_RETRIES)
        return _walk(rng, n, spread)
    if kind == "circular-polyline":
        n = _draw(rng, p.get("n_vertices", [3, 20]), integer=True)
        turn = _draw(rng, p.get("turning", [0.2, 1.9 * math.pi]))
        if n < 2:
            raise InvalidInput("circular-polyline needs at least 2 vertices")
        ang = np.linspace(0.0, turn, n)
        return np.stack([np.sin(ang), 1.0 - np.cos(ang)], axis=1)
    if kind == "L-bracket":
        ratio = _draw(rng, p.get("ratio", [0.05, 1.0]))
        bend = _draw(rng, p.get("bend", [0.1, math.pi - 0.1]))
        return np.array([[0.0, 0.0], [1.0, 0.0], [1.0 - ratio * math.cos(bend), ratio * math.sin(bend)]])
    if kind == "Z-shape":
        top = _draw(rng, p.get("top", [0.2, 1.0]))
        bottom = _draw(rng, p.get("bottom", [0.2, 1.0]))
        lean = _draw(rng, p.get("lean", [-0.8, 0.8]))
        h = _draw(rng, p.get("height", [0.1, 1.0]))
        return np.array([[0.0, h], [top, h], [top * 0.5 + lean * h, 0.0], [top * 0.5 + lean * h + bottom, 0.0]])
    if kind == "spiral":
        n = _draw(rng, p.get("n_vertices", [4, 20]), integer=True)
        turns = _draw(rng, p.get("turns", [0.3, 2.0]))
        t = np.linspace(0.0, 2 * math.pi * turns, n)
        r = 0.2 + t
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=1)
    if kind == "zigzag":
        n = _draw(rng, p.get("n_vertices", [3, 20]), integer=True)
        amp = _draw(rng, p.get("amplitude", [0.05, 2.0]))
        x = np.arange(n, dtype=float)
        y = amp * (np.arange(n) % 2) * rng.uniform(0.5, 1.0, size=n)
        return np.stack([x, y], axis=1)
    if kind == "convex-arc":
        n = _draw(rng, p.get("n_vertices", [3, 20]), integer=True)
        total = _draw(rng, p.get("turning", [0.1, 1.9 * math.pi]))
        return _convex(rng, n, total)
    raise InvalidInput(f"unknown arc family {kind!r}")


def generate(f):
    """Deterministic unit-length simple arc for a family recipe."""
    if f.kind not in KINDS:
        raise InvalidInput(f"unknown arc family {f.kind!r}")
    rng = np.random.default_rng(int(f.seed) & 0xFFFFFFFFFFFFFFFF)
    for attempt in range(10 * MAX_RETRIES):
        a = _normalise(_build(f.kind, f.params, rng, attempt))
        if a.is_simple:
            return a
    raise InvalidInput(f"could not draw a simple {f.kind} arc")


def trial_family(mix, seed, index):
    """Family recipe for trial ``index`` of a campaign: round-robin kind, derived seed."""
    base = mix[index % len(mix)]
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, int(base.seed) & 0xFFFFFFFF, index])
    return ArcFamily(base.kind, dict(base.params), int(ss.generate_state(1, dtype=np.uint64)[0]))


def mixed_corpus(n, seed=0, kinds=KINDS):
    mix = [ArcFamily(k) for k in kinds]
    return [generate(trial_family(mix, seed, i)) for i in range(n)]


def baseline_sector(theta, rule):
    """Known sector covers: ``half-csc-half`` (r = csc(theta/2)/2) and ``csc-two-theta`` (r = csc 2 theta)."""
    if rule == "half-csc-half":
        if not 0.0 < theta <= math.pi / 2 + 1e-15:
            raise InvalidInput("half-csc-half needs 0 < theta <= 90 deg")
        return Sector.standard(theta, 0.5 / math.sin(0.5 * theta))
    if rule == "csc-two-theta":
        if not 0.0 < theta < math.pi / 2:
            raise InvalidInput("csc-two-theta needs 0 < theta < 90 deg")
        return Sector.standard(theta, 1.0 / math.sin(2.0 * theta))
    raise InvalidInput(f"unknown baseline rule {rule!r}")


# histogram edges: one bucket for <= 0, decades from 1e-12 to 1, one for > 1
HIST_EDGES = [0.0] + [10.0**k for k in range(-12, 1)]


def _bucket(v):
    if v <= 0.0:
        return "<=0"
    for lo, hi in zip(HIST_EDGES[:-1], HIST_EDGES[1:]):
        if v <= hi:
            return f"({lo:g}, {hi:g}]"
    return "> 1"


@dataclass
class CampaignReport:
    families: list
    trials: int
    seed: int
    target: dict
    successes: int
    failures: int
    max_violation: float
    histogram: dict
    by_kind: dict
    by_family: dict
    failed_trials: list
    timing: dict = field(default_factory=dict)

    @property
    def success_rate(self):
        return self.successes / self.trials

    def to_dict(self, timing=True):
        d = asdict(self)
        if not timing:
            d.pop("timing")
        return d


def _one_trial(args):
    mix, seed, index, target, scale = args
    fam = trial_family(mix, seed, index)
    arc = generate(fam)
    if scale != 1.0:
        arc = arc.scaled(scale)
    t0 = time.perf_counter()
    res = fit(arc, target, diagnose=False)
    dt = time.perf_counter() - t0
    rec = {
        "index": index,
        "family": fam.kind,
        "seed": fam.seed,
        "success": res.success,
        "violation": res.violation,
        "kind": res.placement.candidate_kind,
        "time": dt,
    }
    if not res.success:
        from .bounds import replay

        out = replay(arc)
        rec["replay"] = {"certificate": out.certificate is not None, "reason": out.reason,
                         "bound": None if out.certificate is None else out.certificate.bound}
    return rec


def _chunk(args):
    return [_one_trial(a) for a in args]


def workers_from_env():
    raw = os.environ.get("SECTORCOVER_WORKERS", "").strip()
    if raw:
        n = int(raw)
        if n < 1:
            raise InvalidInput("SECTORCOVER_WORKERS must be >= 1")
        return n
    return os.cpu_count() or 1


def run_campaign(mix, trials, target, seed=0, workers=None, scale=1.0):
    """Fit ``trials`` generated arcs into ``target`` and aggregate a report.

    Aggregation is keyed by trial index, so the report (timing aside) does not
    depend on the number of workers.
    """
    if trials < 1:
        raise InvalidInput("trials must be >= 1")
    if not mix:
        raise InvalidInput("family mix is empty")
    mix = [m if isinstance(m, ArcFamily) else ArcFamily.from_dict(m) for m in mix]
    workers = workers_from_env() if workers is None else workers
    jobs = [(mix, seed, i, target, scale) for i in range(trials)]
    t0 = time.perf_counter()
    if workers <= 1:
        records = [_one_trial(j) for j in jobs]
    else:
        size = max(1, trials // (workers * 8))
        chunks = [jobs[i:i + size] for i in range(0, trials, size)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = [r for part in ex.map(_chunk, chunks) for r in part]
    wall = time.perf_counter() - t0
    records.sort(key=lambda r: r["index"])
    return _aggregate(mix, trials, seed, target, records, wall)


def _aggregate(mix, trials, seed, target, records, wall):
    hist = {_bucket(v): 0 for v in [-1.0] + HIST_EDGES[1:] + [2.0]}
    by_kind, by_family = {}, {}
    failed = []
    for r in records:
        hist[_bucket(r["violation"])] += 1
        fam = by_family.setdefault(r["family"], {"trials": 0, "successes": 0})
        fam["trials"] += 1
        if r["success"]:
            fam["successes"] += 1
            by_kind[r["kind"]] = by_kind.get(r["kind"], 0) + 1
        else:
            failed.append({k: r[k] for k in ("index", "family", "seed", "violation", "replay")})
    succ = sum(r["success"] for r in records)
    times = [r["time"] for r in records]
    return CampaignReport(
        families=[m.to_dict() for m in mix],
        trials=trials,
        seed=int(seed),
        target={"apex": target.apex.tolist(), "axis": target.axis.tolist(),
                "angle_deg": math.degrees(target.angle), "radius": target.radius, "area": target.area},
        successes=succ,
        failures=trials - succ,
        max_violation=max(r["violation"] for r in records),
        histogram=hist,
        by_kind=dict(sorted(by_kind.items())),
        by_family=dict(sorted(by_family.items())),
        failed_trials=failed,
        timing={"wall_seconds": wall, "mean_fit_seconds": float(np.mean(times)),
                "max_fit_seconds": float(np.max(times))},
    )
