"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 numerical/runtime error.
Command-line flags take precedence over values in the config file, which
take precedence over built-in defaults.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import load_config, with_overrides
from .errors import (
    ConvergenceError,
    DomainError,
    NumericsError,
    ParseError,
    TruncationError,
    TruncationOverflowError,
    ValidationError,
)
from .presets import PRESET_NAMES, list_presets, load_preset
from .runner import SWEEP_AXES, SweepSpec, run_scenario, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2
CONFIG_ERRORS = (ParseError, ValidationError, TruncationError, OSError)
RUNTIME_ERRORS = (NumericsError, TruncationOverflowError, DomainError, ConvergenceError)


def _resolve(target: str):
    path = Path(target)
    if path.is_file():
        return load_config(path)
    if target in PRESET_NAMES:
        return load_preset(target)
    raise ParseError(f"no config file or preset named {target!r}")


def _common(p: argparse.ArgumentParser):
    p.add_argument("target", help="config file path or preset name")
    p.add_argument("--out", help="output file (run) or directory (sweep); '-' is stdout for run")
    p.add_argument("--format", choices=("csv", "jsonl"), help="output format (default csv)")
    p.add_argument("--raw-entropy", action="store_true",
                   help="evaluate entropy on the unnormalized amplitudes")
    p.add_argument("--step", type=float, help="RK4 step in units of 1/lambda0")
    p.add_argument("--t-end", type=float, help="integration window end in units of 1/lambda0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpbnr",
        description="Entropy and inversion dynamics of a lossy CPB coupled to an "
                    "intensity-dependent nanoresonator.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate one configuration")
    _common(run)

    sweep = sub.add_parser("sweep", help="run one configuration over a list of parameter values")
    _common(sweep)
    sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    sweep.add_argument("--values", required=True, help="comma-separated values, e.g. 0,0.001,0.01")
    sweep.add_argument("--jobs", type=int, default=1, help="concurrent sweep points")

    sub.add_parser("presets", help="list the bundled presets")
    return parser


def _configure(args):
    cfg = _resolve(args.target)
    cfg = with_overrides(
        cfg,
        step=args.step,
        t_end=args.t_end,
        normalize_entropy=False if args.raw_entropy else None,
        output_format=args.format,
    )
    return cfg


def _parse_values(text: str) -> tuple:
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            out.append(float(token))
        except ValueError:
            raise ParseError("sweep value is not a number", token=token) from None
    return tuple(out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "presets":
        sys.stdout.write(list_presets())
        return EXIT_OK

    try:
        cfg = _configure(args)
        if args.command == "run":
            out = args.out or cfg.output_path or f"{cfg.name}.{cfg.output_format}"
            cfg = replace(cfg, output_path=out)
        else:
            spec = SweepSpec(cfg, args.axis, _parse_values(args.values))
            out_dir = args.out or f"{cfg.name}-{args.axis}-sweep"
    except CONFIG_ERRORS as exc:
        print(f"cpbnr: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "run":
            run_scenario(cfg)
            return EXIT_OK
        manifest = run_sweep(spec, out_dir, jobs=args.jobs)
    except CONFIG_ERRORS as exc:
        print(f"cpbnr: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RUNTIME_ERRORS as exc:
        print(f"cpbnr: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    failed = [p for p in manifest["points"] if p["status"] != "ok"]
    for p in failed:
        print(f"cpbnr: {args.axis}={p['value']:g} failed: {p['error']}", file=sys.stderr)
    return EXIT_RUNTIME if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
