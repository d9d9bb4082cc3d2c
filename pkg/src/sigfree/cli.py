"""Batch front end: ``sigfree {run,check,bound,sweep} --config FILE``.

Exit status: 0 success / safe, 1 domain failure (violation or failed
certificate), 2 usage, parse or I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from .capacity import capacity_bound, crossing_gap, sweep
from .config import ParseError, load_config, sweep_to_csv, trace_to_csv
from .controller import coordinate_route
from .estimator import DelayedObservation
from .params import InvalidParam
from .safety import certify_initial
from .sim import ConfigError, run, throughput

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory so failures leave nothing behind."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    sc = cfg.scenario
    if args.seed is not None:
        sc = dataclasses.replace(sc, seed=args.seed)
    window = tuple(args.window) if args.window else cfg.window
    trace = run(sc)
    if window is None:
        window = (0.0, sc.horizon * sc.params.delta)
    _write_atomic(args.trace, trace_to_csv(trace))
    nviol = len(trace.violations)
    print(f"ticks: {sc.horizon}")
    print(f"throughput: {throughput(trace, window):.5f} veh/s over [{window[0]:g}, {window[1]:g}) s")
    print(f"violations: {nviol}")
    print(f"infeasible: {trace.infeasible_count}")
    print(f"retired: {len(trace.retired)}  deferred arrivals: {len(trace.deferred)}")
    return EXIT_OK if nviol == 0 else EXIT_FAIL


def initial_certificates(sc):
    """Certificate reports per route for the scenario's initial platoons."""
    p = sc.params
    out = {}
    for route in sorted(sc.routes):
        obs = [DelayedObservation(iv.x - 2 * p.theta * iv.v, iv.v, iv.u_prev) for iv in sc.routes[route]]
        u_now = [d.u if d.u is not None else float("nan") for d in coordinate_route(obs, p)]
        out[route] = certify_initial(obs, u_now, p)
    return out


def cmd_check(args) -> int:
    cfg = load_config(args.config)
    reports = initial_certificates(cfg.scenario)
    ok = True
    any_pairs = False
    for route, rep in reports.items():
        for pc in rep.pairs:
            any_pairs = True
            print(
                f"route {route} pair {pc.follower - 1}->{pc.follower}: "
                f"part1a={pc.existence_value:+.6f} {'pass' if pc.existence_ok else 'FAIL'}  "
                f"part2a={pc.tightness_value:+.6f} {'pass' if pc.tightness_ok else 'failed'}"
            )
            ok &= pc.existence_ok
    if not any_pairs:
        print("no pairs")
    print("certified" if ok else "NOT certified")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bound(args) -> int:
    p = load_config(args.config).scenario.params
    print(f"D={crossing_gap(p):.4g} s, F≥{capacity_bound(p):.5f} veh/s")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    rows = sweep(cfg.sweep, cfg.scenario.params)
    _write_atomic(args.out, sweep_to_csv(rows))
    bad = sum(not r.ok for r in rows)
    print(f"rows: {len(rows)}  invalid: {bad}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sigfree", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate and write a trace CSV")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--trace", required=True)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--window", type=float, nargs=2, metavar=("T0", "T1"))
    p_run.set_defaults(func=cmd_run)

    p_check = sub.add_parser("check", help="evaluate the initial safety certificate")
    p_check.add_argument("--config", required=True)
    p_check.set_defaults(func=cmd_check)

    p_bound = sub.add_parser("bound", help="print the capacity lower bound")
    p_bound.add_argument("--config", required=True)
    p_bound.set_defaults(func=cmd_bound)

    p_sweep = sub.add_parser("sweep", help="tabulate the bound over a parameter grid")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, InvalidParam, ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
