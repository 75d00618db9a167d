"""Command-line front end: run studies, render plots, verify the suite.

Three subcommands:

- ``run``: execute one configured study, writing per-trial records, their
  aggregates, and the study's natural chart into an output directory;
- ``plot``: re-render a chart of any supported kind from a records or
  aggregates CSV;
- ``verify``: run the acceptance test suites (fast invariants or the slow
  figure reproductions) through pytest.

Exit code 0 on success; 1 on invalid arguments, bad configs, or I/O errors.
"""

import argparse
import subprocess
import sys
from dataclasses import replace
from pathlib import Path

from . import experiments

_NATURAL_KIND = {
    "sweep-k": "line-vs-k",
    "sweep-perturbations": "surface-vs-eps",
    "sweep-eps-a-fixed-noise": "line-vs-eps",
    "compressible-k": "line-vs-k-compressible",
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pursuitlab",
        description="Sparse-recovery experiments under system perturbations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one study from a config file")
    run.add_argument("--study", required=True, choices=experiments.STUDIES)
    run.add_argument("--config", required=True, help="path to a key=value config")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--small", action="store_true",
                     help="shrink to the 128x512 quick profile")
    run.add_argument("--workers", type=int, default=1, metavar="N")
    run.add_argument("--seed", type=int, default=None, metavar="S",
                     help="override the config's master seed")

    plot = sub.add_parser("plot", help="render an SVG chart from a CSV")
    plot.add_argument("--in", dest="infile", required=True,
                      help="records or aggregates CSV")
    plot.add_argument("--kind", required=True, choices=experiments.PLOT_KINDS)
    plot.add_argument("--out", required=True, help="output SVG path")

    verify = sub.add_parser("verify", help="run the acceptance suites")
    verify.add_argument("--suite", required=True,
                        choices=("invariants", "figures"))
    return parser


def _cmd_run(args):
    config = experiments.config_from_text(
        Path(args.config).read_text(encoding="utf-8")
    )
    if config.study != args.study:
        raise ValueError(
            f"--study {args.study} does not match the config's study "
            f"{config.study!r}"
        )
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.small:
        config = experiments.small_profile(config)
    config.validate()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = experiments.run_study(config, workers=max(1, args.workers))
    aggregates = experiments.aggregate(records)

    records_path = out_dir / f"{config.study}.csv"
    agg_path = out_dir / f"{config.study}-aggregates.csv"
    svg_path = out_dir / f"{config.study}.svg"
    experiments.emit_csv(records, records_path)
    experiments.emit_csv(aggregates, agg_path)
    experiments.emit_plot(aggregates, _NATURAL_KIND[config.study], svg_path)
    print(f"wrote {len(records)} records to {records_path}")
    print(f"wrote {len(aggregates)} aggregate rows to {agg_path}")
    print(f"wrote chart to {svg_path}")
    return 0


def _cmd_plot(args):
    rows = experiments.read_csv(args.infile)
    if rows and isinstance(rows[0], experiments.TrialRecord):
        rows = experiments.aggregate(rows)
    experiments.emit_plot(rows, args.kind, args.out)
    print(f"wrote chart to {args.out}")
    return 0


def _cmd_verify(args):
    tests_dir = Path(__file__).resolve().parents[2] / "tests"
    target = tests_dir / "test_acceptance.py"
    if not target.exists():
        raise ValueError(
            f"acceptance tests not found at {target}; verify needs a source "
            "checkout"
        )
    marker = "acceptance and not figures" if args.suite == "invariants" \
        else "acceptance and figures"
    return subprocess.call([
        sys.executable, "-m", "pytest", "-v", "-s", str(target), "-m", marker,
    ])


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "plot": _cmd_plot, "verify": _cmd_verify}
    try:
        return handler[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
