"""Command-line front end.

Subcommands:
  sweep     0-D transfer sweep over all requested schemes; writes the
            per-(scheme, dt) envelope CSV.
  bubble    2D bubble cases (single_fluid, full_bubble, half_bubble);
            writes per-run diagnostics, optional field dumps, and the
            scheme-comparison CSV for the full bubble.
  classify  sweep all 20 schemes and write the empirical property table.

Options may also come from a flat key=value config file; command-line
flags override file entries.
"""

from __future__ import annotations

import argparse
import sys

from .cases import ConfigError, RunConfig, _coerce_config, classify, \
    config_from_file, run


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--scheme", help="scheme: 1-6, a variant label, or all20")
    p.add_argument("--preset", choices=("desk", "paper"),
                   help="resolution preset (default desk)")
    p.add_argument("--paper-scale", action="store_true",
                   help="shorthand for --preset paper")
    p.add_argument("--dt", type=float, help="timestep in seconds")
    p.add_argument("--t-end", type=float, dest="t_end",
                   help="integration end time in seconds")
    p.add_argument("--out", help="output directory (default ./out)")
    p.add_argument("--dump-every", type=int, dest="dump_every",
                   help="steps between field dumps (0 = none)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multifluid",
        description="Transfer-scheme laboratory for multi-fluid "
                    "compressible Euler equations")
    subs = parser.add_subparsers(dest="command", required=True)

    p_sweep = subs.add_parser("sweep", help="0-D transfer sweep")
    _add_common(p_sweep)
    p_sweep.add_argument("--points-per-axis", type=int, dest="points_per_axis",
                         help="samples per sweep axis (default 50)")

    p_bubble = subs.add_parser("bubble", help="2D bubble test cases")
    _add_common(p_bubble)
    p_bubble.add_argument("--case",
                          choices=("single_fluid", "full_bubble", "half_bubble"),
                          help="which bubble case to run (default full_bubble)")

    p_cls = subs.add_parser("classify", help="empirical property table")
    _add_common(p_cls)
    p_cls.add_argument("--points-per-axis", type=int, dest="points_per_axis",
                       help="samples per sweep axis (default 50)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("command", "config", "paper_scale")
                 and v is not None}
    if args.command == "sweep":
        overrides["case"] = "sweep"
    elif args.command == "classify":
        overrides.setdefault("case", "sweep")
        overrides["scheme"] = "all20"
    if getattr(args, "paper_scale", False):
        overrides["preset"] = "paper"
    if args.config:
        return config_from_file(args.config, overrides)
    return _coerce_config(overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if args.command == "classify":
            table = classify(cfg)
            for label, props in table.items():
                print(f"{label}: eta>=0 {props.positive_eta}  "
                      f"bounded {props.bounded}  "
                      f"momentum/IE {props.momentum_ie}  "
                      f"KE-decreasing {props.ke_decreases}")
            return 0
        return run(cfg)
    except (ConfigError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
