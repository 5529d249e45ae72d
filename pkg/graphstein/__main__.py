"""
Command line interface of graphstein.

```
python -m graphstein power-curve --config power.cfg --out power.csv
python -m graphstein assess-samples --config assess.cfg --format html --out report.html
python -m graphstein runtime-bench --config bench.cfg --out runtime.csv
```

The `--seed` and `--workers` flags override the values in the config
file, which in turn override the GRAPHSTEIN_* environment variables.
Exit codes: 0 on success, 1 on other errors, 2 on config errors and
3 when graph files or sample directories cannot be read.
"""

import sys
import argparse
import logging

import numpy
import scipy
import graphstein
from graphstein.experiments import (
    load_experiment_config,
    cmd_power_curve,
    cmd_assess_samples,
    cmd_runtime_bench,
    POWER_CURVE,
    ASSESS_SAMPLES,
    RUNTIME_BENCH,
    REPORT_FORMATS,
)
from graphstein._errors import (
    GraphSteinError,
    ConfigError,
    IngestError,
    ParseError,
)


def print_version():
    print("graphstein", graphstein.__version__)
    print("numpy", numpy.__version__)
    print("scipy", scipy.__version__)


# Special hooks exit early
if __name__ == "__main__" and len(sys.argv) >= 2:
    if sys.argv[1] in ("--version", "version"):
        print_version()
        sys.exit(0)


def setup_parser():
    """setup argument parsing"""
    argparser = argparse.ArgumentParser(
        prog="graphstein",
        description="Kernel Stein goodness-of-fit tests for random graph models.",
    )
    subparsers = argparser.add_subparsers(dest="command")

    def add_common(parser, out_help):
        parser.add_argument("--config", required=True, help="experiment config file")
        parser.add_argument("--out", help=out_help)
        parser.add_argument("--seed", type=int, default=None, help="base random seed")
        parser.add_argument(
            "--workers", type=int, default=None, help="number of worker processes"
        )

    parser = subparsers.add_parser(POWER_CURVE, help="rejection rates over a grid")
    add_common(parser, "the power CSV (appended to, to resume a run)")
    parser.set_defaults(func=handle_power_curve, expected=POWER_CURVE)

    parser = subparsers.add_parser(ASSESS_SAMPLES, help="test a graph against samples")
    add_common(parser, "the report file (default: print)")
    parser.add_argument("--format", choices=REPORT_FORMATS, default="md")
    parser.set_defaults(func=handle_assess_samples, expected=ASSESS_SAMPLES)

    parser = subparsers.add_parser(RUNTIME_BENCH, help="time the statistic per kernel")
    add_common(parser, "the runtime CSV")
    parser.set_defaults(func=handle_runtime_bench, expected=RUNTIME_BENCH)

    return argparser


def _load(args):
    cfg = load_experiment_config(args.config)
    if cfg.experiment != args.expected:
        raise ConfigError(
            f"{args.config} is a {cfg.experiment} config, not {args.expected}"
        )
    return cfg.override(seed=args.seed, workers=args.workers)


def handle_power_curve(args):
    cfg = _load(args)
    out = args.out or f"{cfg.name}.csv"
    written = cmd_power_curve(cfg, out)
    print(f"Wrote {written} rows to {out}")


def handle_assess_samples(args):
    cfg = _load(args)
    report = cmd_assess_samples(cfg, args.out, args.format)
    if args.out:
        print(f"Wrote report to {args.out}")
    else:
        print(report)


def handle_runtime_bench(args):
    cfg = _load(args)
    out = args.out or f"{cfg.name}.csv"
    rows = cmd_runtime_bench(cfg, out)
    print(f"Wrote {len(rows)} rows to {out}")


def main(argv=None):
    """Run the CLI and return the exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv[:1] in (["--version"], ["version"]):
        print_version()
        return 0
    logging.basicConfig(format="%(asctime)s %(levelname)s: %(message)s")
    argparser = setup_parser()
    args = argparser.parse_args(argv)
    if not getattr(args, "func", None):
        argparser.print_help()
        return 2
    try:
        args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (IngestError, ParseError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except GraphSteinError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
