"""Command line: ``sectorcover {fit,replay,render,campaign}``.

Exit codes: 0 success, 1 analytic failure, 2 input error.
"""

import argparse
import json
import math
import sys

from . import documents
from .bounds import replay
from .fitter import fit
from .geometry import InvalidInput, Sector
from .harness import KINDS, ArcFamily, run_campaign
from .render import certificates_figure, placement_figure, unfolding_figure
from .support import find_certificates

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

DEFAULT_CAMPAIGN = {
    "families": list(KINDS),
    "trials": 10000,
    "seed": 0,
    "sector": {"angle_deg": 30.0, "radius": 1.0},
}


def _sector(angle_deg, radius):
    try:
        return Sector.standard(math.radians(angle_deg), radius)
    except InvalidInput as exc:
        raise InvalidInput(f"bad sector: {exc}") from exc


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_fit(args):
    arc = documents.load(args.arc)
    s = _sector(args.angle_deg, args.radius)
    res = fit(arc, s)
    _emit(res.to_dict(with_candidates=args.candidates), args.output)
    return EXIT_OK if res.success else EXIT_FAIL


def cmd_replay(args):
    arc = documents.load(args.arc)
    if not arc.is_simple:
        raise InvalidInput("arc is not simple")
    out = replay(arc)
    _emit(out.to_dict(), args.output)
    return EXIT_OK


def cmd_render(args):
    arc = documents.load(args.arc)
    s = _sector(args.angle_deg, args.radius)
    code = EXIT_OK
    if args.mode == "placement":
        res = fit(arc, s, diagnose=False)
        svg = placement_figure(arc, s, res.placement)
        code = EXIT_OK if res.success else EXIT_FAIL
    elif args.mode == "certificates":
        if not arc.is_simple:
            raise InvalidInput("arc is not simple")
        svg = certificates_figure(arc, find_certificates(arc, s.angle))
    else:
        if not arc.is_simple:
            raise InvalidInput("arc is not simple")
        out = replay(arc)
        if out.certificate is None:
            print(f"no unfolding to draw: {out.reason}", file=sys.stderr)
            return EXIT_FAIL
        svg = unfolding_figure(arc, out.certificate)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return code


def load_campaign_config(path):
    cfg = dict(DEFAULT_CAMPAIGN)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read campaign config: {exc}") from exc
        if not isinstance(user, dict):
            raise InvalidInput("campaign config must be a JSON object")
        unknown = set(user) - set(DEFAULT_CAMPAIGN)
        if unknown:
            raise InvalidInput(f"unknown campaign config keys: {sorted(unknown)}")
        cfg.update(user)
    trials = cfg["trials"]
    if not isinstance(trials, int) or isinstance(trials, bool) or trials < 1:
        raise InvalidInput("trials must be a positive integer")
    fams = cfg["families"]
    if not isinstance(fams, list) or not fams:
        raise InvalidInput("families must be a non-empty list")
    mix = [ArcFamily.from_dict(f) for f in fams]
    for m in mix:
        if m.kind not in KINDS:
            raise InvalidInput(f"unknown arc family {m.kind!r}")
    sec = cfg["sector"]
    if not isinstance(sec, dict):
        raise InvalidInput("sector must be an object")
    target = _sector(float(sec.get("angle_deg", 30.0)), float(sec.get("radius", 1.0)))
    return mix, trials, int(cfg["seed"]), target


def cmd_campaign(args):
    mix, trials, seed, target = load_campaign_config(args.config)
    if args.trials is not None:
        if args.trials < 1:
            raise InvalidInput("trials must be a positive integer")
        trials = args.trials
    report = run_campaign(mix, trials, target, seed=seed, workers=args.workers)
    _emit(report.to_dict(), args.output)
    print(f"{report.successes}/{report.trials} fitted, max violation {report.max_violation:.3e}", file=sys.stderr)
    return EXIT_OK if report.failures == 0 else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="sectorcover", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def sector_flags(sp):
        sp.add_argument("--angle-deg", type=float, default=30.0, help="sector angle in degrees (default 30)")
        sp.add_argument("--radius", type=float, default=1.0, help="sector radius (default 1)")

    sp = sub.add_parser("fit", help="place an arc inside a sector")
    sp.add_argument("arc")
    sector_flags(sp)
    sp.add_argument("--candidates", action="store_true", help="include every evaluated candidate")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("replay", help="run the support-wedge / unfolding pipeline")
    sp.add_argument("arc")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("render", help="write an SVG figure")
    sp.add_argument("arc")
    sp.add_argument("--mode", choices=("placement", "certificates", "unfolding"), default="placement")
    sector_flags(sp)
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("campaign", help="Monte Carlo fitting campaign")
    sp.add_argument("config", nargs="?", help="JSON config (families, trials, seed, sector)")
    sp.add_argument("--trials", type=int, help="override the trial count")
    sp.add_argument("--workers", type=int, help="worker processes (default: SECTORCOVER_WORKERS or all cores)")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_campaign)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
