"""Command-line entry point.

Exit status: 0 success, 1 invalid input (including usage errors and step-size
violations), 2 numeric blow-up, 3 a failed experiment assertion.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import observables as obs
from .analytic import soliton, plane_wave
from .config import KEYS, format_config, parse_config
from .errors import NumericBlowupError, SolitonError
from .fields import Field
from .harness import (format_table, initial_kind, plane_wave_k, run_experiment, simulate,
                      sweep)
from .model import ModelParams, classify_regime, compute_coefficients
from .storage import dump_json, output_lock, write_heatmap, write_report, write_trajectory

EXIT_OK, EXIT_INVALID, EXIT_BLOWUP, EXIT_FAILED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value config file")
    for key in KEYS:
        p.add_argument(f"--{key}", dest=f"cfg_{key}", metavar="VALUE")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinsoliton",
                     description="Solitons of an XXZ chain in an oblique field")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("coeffs", help="print coefficients and regime")
    for key in ("J", "delta", "theta", "B", "S", "hbar"):
        c.add_argument(f"--{key}", type=float, default=getattr(ModelParams, key))

    s = sub.add_parser("simulate", help="run one model from a config")
    _config_flags(s)
    s.add_argument("--out", type=Path)
    s.add_argument("--heatmap", action="store_true", help="also write a PGM of |phi(x,t)|")

    m = sub.add_parser("compare", help="numeric run against the closed form")
    _config_flags(m)

    w = sub.add_parser("sweep", help="sweep theta or lambda")
    _config_flags(w)
    w.add_argument("--axis", choices=("theta", "lambda"), required=True)
    w.add_argument("--values", required=True, help="comma-separated values")
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--out", type=Path)

    e = sub.add_parser("experiment", help="run a figure preset with its assertions")
    _config_flags(e)
    e.add_argument("--out", type=Path)
    e.add_argument("--heatmap", action="store_true")
    return parser


def _load_config(args):
    text = args.config.read_text(encoding="utf-8") if args.config else ""
    overrides = [(k, getattr(args, f"cfg_{k}")) for k in KEYS
                 if getattr(args, f"cfg_{k}") is not None]
    lines = [line for line in text.splitlines()
             if line.split("#", 1)[0].split("=", 1)[0].strip() not in dict(overrides)]
    lines += [f"{k} = {v}" for k, v in overrides]
    return parse_config("\n".join(lines))


def _print_kv(items) -> None:
    for k, v in items:
        if isinstance(v, float):
            print(f"{k:<12} {v:.10g}")
        else:
            print(f"{k:<12} {v}")


def cmd_coeffs(args) -> int:
    p = ModelParams(J=args.J, delta=args.delta, theta=args.theta, B=args.B, S=args.S,
                    hbar=args.hbar)
    c = compute_coefficients(p)
    r = classify_regime(p)
    _print_kv([("c0", c.c0), ("c1", c.c1), ("c2", c.c2), ("c3", c.c3), ("V", c.V),
               ("chi", c.chi), ("theta_magic", c.theta_magic), ("regime", r.kind.value),
               ("lambda", r.lam), ("admissible", r.admissible)])
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    print(format_config(cfg), end="")
    traj = simulate(cfg)
    final = traj.final
    _print_kv([("equation", traj.meta["equation"]), ("snapshots", len(traj)),
               ("t_final", float(final.time)), ("max_modulus", float(final.modulus.max())),
               ("norm", obs.l2_norm(final) ** 2)])
    if args.out:
        with output_lock(args.out) as d:
            write_trajectory(traj, d / "trajectory.csv")
            if args.heatmap:
                write_heatmap(traj, d / "trajectory.pgm")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    print(format_config(cfg), end="")
    traj = simulate(cfg)
    p, sp = cfg.params, cfg.soliton
    c = compute_coefficients(p)
    kind = initial_kind(p)
    x = traj.grid.x
    print(f"{'t':>8} {'linf_mod':>14} {'l2_dev':>14}")
    for f in traj:
        if kind == "plane":
            exact = plane_wave(c, p, plane_wave_k(cfg, traj.grid), sp.A, x, f.time)
        else:
            exact = soliton(c, p, sp, kind, x, f.time)
        ref = Field(exact, traj.grid, f.time)
        print(f"{f.time:>8.4g} {obs.linf_deviation(f, ref):>14.6e} "
              f"{obs.l2_deviation(f, ref):>14.6e}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    rows = sweep(cfg, args.axis, values, workers=args.workers)
    print(format_table(rows, args.axis))
    if args.out:
        with output_lock(args.out) as d:
            dump_json({"config": cfg.to_dict(), "axis": args.axis,
                       "rows": [r.to_dict() for r in rows]}, d / "sweep.json")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = _load_config(args)
    report = run_experiment(cfg)
    if args.out:
        write_report(report, args.out, heatmaps=args.heatmap)
    for name, ok in report.assertions.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    for name, value in sorted(report.metrics.items()):
        print(f"  {name} = {value:.6g}" if isinstance(value, float) else f"  {name} = {value}")
    return EXIT_OK if report.passed else EXIT_FAILED


COMMANDS = {"coeffs": cmd_coeffs, "simulate": cmd_simulate, "compare": cmd_compare,
            "sweep": cmd_sweep, "experiment": cmd_experiment}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except NumericBlowupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except (SolitonError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
