"""Command-line entry point: ``simulate``, ``predict`` and ``summarize``."""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from ..constants import MU_EARTH
from ..controller import adapt_y_lim, delta_e_per_burn, limit_cycle_metrics
from ..errors import ConfigError, GroundtrackError
from ..groundtrack import DEFAULT_X_LIM
from .config import ScenarioConfig, apply_overrides, load_config
from .metrics import summarize
from .records import read_csv, write_csv
from .scenario import run_scenario

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ep-groundtrack",
                                     description="Adaptive repeat-groundtrack maintenance")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a closed-loop scenario and write the CSV log")
    sim.add_argument("--config", help="flat key = value scenario file")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--duration-days", type=float)
    sim.add_argument("--out", help="CSV output path")
    sim.add_argument("--mode", choices=("full", "double-integrator"))
    sim.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="extra configuration override (repeatable)")

    pred = sub.add_parser("predict", help="closed-form limit cycle and eccentricity figures")
    pred.add_argument("--p", type=float, help="disturbance curvature (rad/s^2)")
    pred.add_argument("--k", type=float, help="control gain (rad/s^2)")
    pred.add_argument("--ylim", type=float, help="band half-width (rad)")
    pred.add_argument("--umax", type=float, help="thrust acceleration (m/s^2)")
    pred.add_argument("--a", type=float, help="reference semi-major axis (m)")
    pred.add_argument("--r", type=str, help="repeat ratio, e.g. 3/46")
    pred.add_argument("--T", type=float, help="burn duration (s)")
    pred.add_argument("--f0", type=float, default=0.0, help="burn start true anomaly (rad)")

    summ = sub.add_parser("summarize", help="print metrics of a CSV log")
    summ.add_argument("--in", dest="path", required=True)
    summ.add_argument("--umax", type=float, default=0.0,
                      help="thrust acceleration used for the delta-v figure")
    return parser


def _simulate(args) -> int:
    config = load_config(args.config) if args.config else ScenarioConfig()
    overrides = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    if args.seed is not None:
        overrides["sim.seed"] = str(args.seed)
    if args.duration_days is not None:
        overrides["sim.duration_days"] = repr(args.duration_days)
    if args.mode is not None:
        overrides["sim.mode"] = args.mode
    if args.out is not None:
        overrides["sim.output"] = args.out
    config = apply_overrides(config, overrides)
    result = run_scenario(config)
    if config.sim.output:
        write_csv(result.records, config.sim.output)
    for line in result.summary.as_lines():
        print(line)
    return EXIT_OK


def _predict(args) -> int:
    shown = False
    k = args.k
    if k is None and None not in (args.umax, args.a, args.r):
        try:
            r = Fraction(args.r)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"invalid repeat ratio {args.r!r}") from None
        k = 3.0 * float(r) * args.umax / args.a
        print(f"k = {k:.6e}")
        shown = True
    if args.p is not None and k is not None:
        y_lim = args.ylim
        if y_lim is None and args.T is not None:
            y_lim = adapt_y_lim(args.p, k, args.T, DEFAULT_X_LIM)
            print(f"y_lim = {y_lim:.6e}")
        if y_lim is not None:
            m = limit_cycle_metrics(args.p, k, y_lim)
            print(f"T_L = {m.period:.6e}")
            print(f"T_F = {m.firing_time:.6e}")
            print(f"T_C = {m.coasting_time:.6e}")
            print(f"D = {m.duty_cycle:.6g}")
            shown = True
    if None not in (args.umax, args.a, args.T):
        de = delta_e_per_burn(args.umax, args.a, MU_EARTH, args.f0, args.T)
        print(f"delta_e = {de:.6e}")
        n = math.sqrt(MU_EARTH / args.a ** 3)
        print(f"orbital_period = {2.0 * math.pi / n:.6e}")
        shown = True
    if not shown:
        raise ConfigError("predict needs --p --k --ylim, or --umax --a --r/--T")
    return EXIT_OK


def _summarize(args) -> int:
    try:
        records = read_csv(args.path)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.path}: {exc.strerror}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for line in summarize(records, args.umax).as_lines():
        print(line)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"simulate": _simulate, "predict": _predict, "summarize": _summarize}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GroundtrackError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
