"""``forage-sim`` command line.

Exit status: 0 on success, 1 on spec errors, 2 on runtime faults.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiment import SpecError, emit_plot_data, execute, parse_spec_file, read_summary


def _cmd_run(args) -> int:
    try:
        spec = parse_spec_file(args.spec)
    except OSError as exc:
        print(f"error: cannot read spec: {exc}", file=sys.stderr)
        return 1
    except SpecError as exc:
        for msg in exc.errors:
            print(f"{args.spec}: {msg}", file=sys.stderr)
        return 1
    if args.master_seed is not None:
        spec.master_seed = args.master_seed
    return execute(spec, out_dir=args.out, workers=args.workers)


def _cmd_plot(args) -> int:
    try:
        rows = read_summary(args.summary)
        text = emit_plot_data(rows, args.axis, args.value)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    Path(args.out).write_text(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forage-sim",
                                     description="Swarm foraging division-of-labour simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute an experiment spec")
    p.add_argument("--spec", required=True, help="spec file (key = value lines)")
    p.add_argument("--out", help="output directory (overrides output_dir in the spec)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--master-seed", type=int, default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("plot", help="reduce a summary.csv to plot-ready columns")
    p.add_argument("--summary", required=True)
    p.add_argument("--axis", required=True)
    p.add_argument("--value", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 1
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
