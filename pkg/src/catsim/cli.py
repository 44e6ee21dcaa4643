"""Command-line front end.

Subcommands:
  run <config.json>       evolve one scenario and write its output files
  sweep <config.json>     run the scenario's sweep block
  validate <config.json>  check a configuration and report problems
  schema                  print the configuration JSON schema

Exit codes: 0 success, 1 configuration/validation failure, 2 numerical
failure (non-convergence or integrator breakdown; partial outputs are
flagged in meta.json).
"""

from __future__ import annotations

import argparse
import json
import sys

from ._version import __version__
from .config import ConfigError, config_schema, load_config
from .dynamics import NonConvergenceError, StepSizeUnderflowError
from .runner import run_scenario, run_sweep


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catsim",
        description="driven-dissipative cat-state scenarios on truncated Fock spaces",
    )
    parser.add_argument("--version", action="version", version=f"catsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="scenario configuration (JSON)")
        p.add_argument("--out", metavar="DIR", default=None, help="output directory override")
        p.add_argument(
            "--truncation",
            metavar="N[,M]",
            default=None,
            help="override truncation of mode a (and b)",
        )
        p.add_argument("--quiet", action="store_true", help="suppress progress output")

    p_run = sub.add_parser("run", help="run one scenario")
    add_common(p_run)
    p_sweep = sub.add_parser("sweep", help="run the scenario's parameter sweep")
    add_common(p_sweep)
    p_sweep.add_argument("--workers", type=int, default=1, metavar="K",
                         help="concurrent sweep points (default 1)")
    p_val = sub.add_parser("validate", help="validate a configuration file")
    p_val.add_argument("config", help="scenario configuration (JSON)")
    sub.add_parser("schema", help="print the configuration JSON schema")
    return parser


def _apply_truncation_override(cfg_raw: dict, spec: str) -> None:
    parts = spec.split(",")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise ConfigError("--truncation", f"expected N or N,M, got {spec!r}") from None
    if len(values) not in (1, 2):
        raise ConfigError("--truncation", f"expected N or N,M, got {spec!r}")
    cfg_raw["truncation"]["a"] = values[0]
    if len(values) == 2:
        cfg_raw["truncation"]["b"] = values[1]


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "schema":
        json.dump(config_schema(), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return 0

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.command == "validate":
        print(f"{args.config}: ok")
        return 0

    if args.truncation:
        try:
            raw = cfg.resolved
            _apply_truncation_override(raw, args.truncation)
            from .config import parse_config

            cfg = parse_config(raw)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1

    out_dir = args.out or cfg.output_dir
    try:
        if args.command == "run":
            run_scenario(cfg, out_dir=out_dir, quiet=args.quiet)
            if not args.quiet:
                print(f"wrote outputs to {out_dir}")
        else:
            if cfg.sweep is None:
                print("error: sweep: configuration has no sweep block", file=sys.stderr)
                return 1
            run_sweep(cfg, out_dir=out_dir, workers=args.workers, quiet=args.quiet)
            if not args.quiet:
                print(f"wrote sweep outputs to {out_dir}")
    except (NonConvergenceError, StepSizeUnderflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
