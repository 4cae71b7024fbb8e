"""Command-line entry point: ``nrucoex-sim`` / ``python -m nrucoex``."""

import argparse
import sys

from .experiment import ConfigError, build_config, read_config_file, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def build_parser():
    p = argparse.ArgumentParser(
        prog="nrucoex-sim",
        description="Monte-Carlo sweep of NR-U channel access schemes against WiGig.",
    )
    p.add_argument("--config", metavar="PATH", help="key = value file; flags override it")
    p.add_argument("--k", metavar="LIST", help="comma-separated pair counts, e.g. 8,16,24")
    p.add_argument("--strategy", metavar="LIST",
                   help="comma-separated schemes (noLBT, omniLBT, dirLBT+LBR, ...) or 'all'")
    p.add_argument("--reception", metavar="MODE",
                   help="omni, quasi, or a comma list / 'both'")
    p.add_argument("--drops", type=int, metavar="N")
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--scs", type=int, metavar="KHZ")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--jobs", type=int, metavar="N", help="worker processes, 0 = all cores")
    p.add_argument("--dump-drops", action="store_true", help="also write per-drop drops.csv")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        entries = read_config_file(args.config) if args.config else {}
        for key in ("k", "strategy", "reception", "drops", "seed", "scs", "out", "jobs"):
            value = getattr(args, key)
            if value is not None:
                entries[key] = str(value)
        if args.dump_drops:
            entries["dump_drops"] = "true"
        cfg = build_config(entries)
    except ConfigError as e:
        print(f"nrucoex-sim: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        paths = run_experiment(cfg)
    except OSError as e:
        print(f"nrucoex-sim: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
