"""Command-line front end.

Subcommands: run, sweep, compare, eda, ensemble. Every subcommand takes a
config file plus optional overrides and writes CSV files into the output
directory. Exit code 0 on success, 2 with a one-line stderr diagnostic on
configuration or data-format errors.
"""

import argparse
import sys

from . import experiments
from .errors import ConfigError, DataFormatError

_COMMANDS = (
    ("run", experiments.cmd_run,
     "repeated runs of one benchmark/operator pair"),
    ("sweep", experiments.cmd_sweep,
     "grid over confidence-interval crossover parameters"),
    ("compare", experiments.cmd_compare,
     "several crossover operators on one benchmark"),
    ("eda", experiments.cmd_eda,
     "Gaussian estimation-of-distribution baseline"),
    ("ensemble", experiments.cmd_ensemble,
     "classifier ensemble weighting from prediction files"),
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cixl2",
        description="Real-coded genetic algorithm experiments built around "
                    "confidence-interval crossover.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, func, help_text in _COMMANDS:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", required=True, help="experiment config file")
        sub.add_argument("--out", help="output directory (overrides the config)")
        sub.add_argument("--runs", type=int, help="repeated run count override")
        sub.add_argument("--seed", type=int, help="base seed override")
        sub.add_argument("--workers", type=int, help="parallel run count override")
        sub.set_defaults(func=func)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        written = args.func(args.config, out=args.out, runs=args.runs,
                            seed=args.seed, workers=args.workers)
    except (ConfigError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for value in written.values():
        for path in value if isinstance(value, list) else [value]:
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
