"""Command-line interface: ``pressura run|analyze|ancestor|tasks|plot``."""

from __future__ import annotations

import argparse
import os
import sys

from ..analysis import NonViableError, analyze_genome
from ..environment import COMPLEXITIES, build_environment, format_environment
from ..isa import read_genome, reference_ancestor, serialize_genome
from .config import PRESETS, ConfigError, load_config, load_config_file, with_overrides
from .plot import render_timeseries
from .runner import AncestorError, run_batch

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_EXTINCT = 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pressura",
                                description="Digital evolution of self-replicating programs.")
    sub = p.add_subparsers(dest="command", metavar="command")
    sub.required = True

    r = sub.add_parser("run", help="run a preset or config file")
    r.add_argument("config", help=f"preset ({', '.join(PRESETS)}) or config file")
    r.add_argument("--seed", type=int)
    r.add_argument("--out", help="batch output directory")
    r.add_argument("--replicates", type=int)
    r.add_argument("--updates", type=int)
    r.add_argument("--capacity", type=int)
    r.add_argument("--ancestor", help="ancestor genome file or prior run directory")
    r.add_argument("--workers", type=int, default=1, help="replicates run in parallel")

    a = sub.add_parser("analyze", help="one-point-mutant neutrality report")
    a.add_argument("genome")
    a.add_argument("--env", default="complex", choices=COMPLEXITIES)
    a.add_argument("--popsize", type=float, default=400, help="N of the 1/N neutrality band")
    a.add_argument("--rate", type=float, default=0.0075, help="per-site copy error rate R")
    a.add_argument("--fixed-length", action="store_true",
                   help="treat length-changing divides as failures")

    an = sub.add_parser("ancestor", help="print the reference ancestor genome")
    an.add_argument("--length", type=int, default=20)

    t = sub.add_parser("tasks", help="list the rewarded tasks of an environment")
    t.add_argument("complexity", choices=COMPLEXITIES)

    pl = sub.add_parser("plot", help="SVG time series of stats columns")
    pl.add_argument("stats", nargs="+")
    pl.add_argument("--columns", required=True)
    pl.add_argument("--out", required=True)
    pl.add_argument("--title", default="")
    return p


def _cmd_run(args) -> int:
    if os.path.isfile(args.config):
        cfg = load_config_file(args.config)
    else:
        cfg = load_config(args.config)
    changes = {k: v for k, v in (("seed", args.seed), ("replicates", args.replicates),
                                 ("updates", args.updates), ("capacity", args.capacity),
                                 ("ancestor", args.ancestor), ("out_dir", args.out))
               if v is not None}
    cfg = with_overrides(cfg, **changes)
    result = run_batch(cfg, workers=max(1, args.workers))
    print(f"{result.directory}: {cfg.replicates - len(result.failures)}/{cfg.replicates} "
          f"replicates finished; summary {result.summary}")
    if result.failures:
        k, msg = next(iter(result.failures.items()))
        print(f"pressura: replicate {k} failed: {msg}", file=sys.stderr)
        return EXIT_ERROR
    if result.extinct:
        print("pressura: population went extinct", file=sys.stderr)
        return EXIT_EXTINCT
    return EXIT_OK


def _cmd_analyze(args) -> int:
    g = read_genome(args.genome)
    env = build_environment(args.env)
    report = analyze_genome(g, env, args.popsize, args.rate, os.path.basename(args.genome),
                            args.fixed_length)
    sys.stdout.write(report.format())
    return EXIT_OK


def _cmd_ancestor(args) -> int:
    sys.stdout.write(serialize_genome(reference_ancestor(args.length)))
    return EXIT_OK


def _cmd_tasks(args) -> int:
    sys.stdout.write(format_environment(build_environment(args.complexity)))
    return EXIT_OK


def _cmd_plot(args) -> int:
    render_timeseries(args.stats, args.columns, args.out, args.title)
    return EXIT_OK


COMMANDS = {"run": _cmd_run, "analyze": _cmd_analyze, "ancestor": _cmd_ancestor,
            "tasks": _cmd_tasks, "plot": _cmd_plot}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, AncestorError, NonViableError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"pressura: error: {msg}", file=sys.stderr)
        return EXIT_ERROR


def cli_dispatch(argv) -> int:
    return main(list(argv))


if __name__ == "__main__":
    sys.exit(main())
