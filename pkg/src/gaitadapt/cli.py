"""Command line entry point: ``simulate``, ``plan`` and ``check``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import load_scenario
from .errors import GaitAdaptError
from .export import write_plan, write_trace
from .simulator import run, summarize
from .terrain import Terrain


def _simulate(args) -> int:
    sc = load_scenario(args.scenario)
    trace = run(sc)
    files = write_trace(trace, args.out)
    for f in files:
        print(f)
    return 0


def _plan(args) -> int:
    sc = load_scenario(args.config)
    out = Path(args.out)
    write_plan(sc.gait, out, n_cycles=args.cycles or sc.n_cycles, rate_hz=args.rate)
    print(out)
    return 0


def _check(args) -> int:
    """Reach and flat-ground ZMP containment of the configured gait."""
    sc = replace(load_scenario(args.config), terrain=Terrain())
    report = summarize(run(sc))
    ok = report.min_zmp_margin > 0
    print("reach: ok")
    print(f"min ZMP margin: {report.min_zmp_margin:.6f} m ({'ok' if ok else 'VIOLATED'})")
    print(f"max required friction: {report.max_mu_req:.4f}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gaitadapt", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a scenario and write CSV traces plus a report")
    s.add_argument("scenario", help="scenario file (key = value lines, obstacle lines)")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=_simulate)

    p = sub.add_parser("plan", help="write the preplanned (unadapted) trajectories to CSV")
    p.add_argument("config")
    p.add_argument("--out", default="plan.csv")
    p.add_argument("--cycles", type=int, default=None, help="defaults to n_cycles of the config")
    p.add_argument("--rate", type=float, default=200.0, help="sample rate [Hz]")
    p.set_defaults(func=_plan)

    c = sub.add_parser("check", help="feasibility check; exits 1 on a ZMP violation")
    c.add_argument("config")
    c.set_defaults(func=_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GaitAdaptError as exc:
        tick = getattr(exc, "tick", None)
        where = f" (tick {tick})" if tick is not None else ""
        print(f"error{where}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
