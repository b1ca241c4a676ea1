"""``mirank`` command line: load a CSV, rank its variables, render the result."""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

from . import __version__
from .dataset import bundled_path, load_csv, partition
from .discretize import BinningRule
from .errors import ComputeError, DataError
from .infotheory import Estimator
from .mrmr import METHODS, Method, MethodConfig, rank
from .render import (
    RenderOptions,
    render_heatmap,
    render_parallel_coords,
    render_summary,
    report_to_text,
    result_to_json,
)
from .stability import DEFAULT_FRACTIONS, DEFAULT_REPS, BootstrapConfig, bootstrap_ranks, parse_fractions

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_COMPUTE = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # one line instead of argparse's usage dump
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="mirank",
        description="Rank variables by mutual-information relevance to an importance set, penalised by redundancy.",
    )
    p.add_argument("--version", action="version", version=f"mirank {__version__}")
    p.add_argument("--data", required=True, help="CSV file with a header row, or bundled:pima / bundled:longley")
    p.add_argument("--importance", required=True, help="comma-separated names of the important variables")
    p.add_argument("--method", default="peng", choices=METHODS, help="redundancy normalisation (default: peng)")
    p.add_argument("--ratio", type=float, default=1.0, help="beta for battiti and kwak (default: 1.0)")
    p.add_argument("--algo", default="forward", choices=("forward", "backward"))
    p.add_argument("--scheme", default="mid", choices=("mid", "miq"))
    p.add_argument(
        "--discretization",
        default="sturges",
        metavar="RULE",
        help="cencov, fd, scott, sturges, doane, rice, kmeans[:ratio] or manual:<k> (default: sturges)",
    )
    p.add_argument("--closed", default="left", choices=("left", "right"), help="closed side of histogram bins")
    p.add_argument("--estimator", default="plugin", metavar="EST", help="plugin, gaussian or knn[:k] (default: plugin)")
    p.add_argument("--units", default="bits", choices=("bits", "nats"), help="information unit (default: bits)")
    p.add_argument(
        "--positional-entropy",
        action="store_true",
        help="esteves only: read entropies by list position, as the legacy reference output does",
    )
    p.add_argument("--n", type=int, default=None, metavar="N", help="stop after N ranked variables")
    p.add_argument("--type", action="append", default=[], metavar="NAME=KIND", help="force a column numeric or categorical")
    p.add_argument("--output", default="text", choices=("text", "json", "svg"))
    p.add_argument("--out", default=None, metavar="PATH", help="write here instead of stdout")
    p.add_argument("--digits", type=int, default=3)
    p.add_argument(
        "--bootstrap",
        nargs="?",
        const=",".join(f"{f:g}" for f in DEFAULT_FRACTIONS),
        default=None,
        metavar="FRACS",
        help="run a subsampling stability study at these comma-separated fractions",
    )
    p.add_argument("--reps", type=int, default=DEFAULT_REPS, help=f"subsamples per fraction (default: {DEFAULT_REPS})")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true", help="report loading and per-step progress on stderr")
    return p


def _resolve_data(text: str) -> Path:
    if text.startswith("bundled:"):
        return bundled_path(text.split(":", 1)[1])
    return Path(text)


def _type_hints(items: list[str]) -> dict[str, str]:
    hints = {}
    for item in items:
        name, sep, kind = item.partition("=")
        if not sep or kind not in ("numeric", "categorical"):
            raise UsageError(f"--type expects NAME=numeric or NAME=categorical, got {item!r}")
        hints[name] = kind
    return hints


def _config(args) -> MethodConfig:
    try:
        rule = BinningRule.parse(args.discretization)
        estimator = Estimator.parse(args.estimator)
        method = Method(args.method, args.ratio)
        return MethodConfig(
            method=method,
            scheme=args.scheme,
            direction=args.algo,
            rule=rule,
            estimator=estimator,
            n_requested=args.n,
            seed=args.seed,
            log_base=2.0 if args.units == "bits" else math.e,
            closed=args.closed,
            positional_entropy=args.positional_entropy,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = _config(args)
    if args.positional_entropy and args.algo == "backward":
        raise UsageError("--positional-entropy applies to forward search only")
    if args.digits < 0:
        raise UsageError("--digits must be non-negative")
    important = [s.strip() for s in args.importance.split(",") if s.strip()]
    if not important:
        raise UsageError("--importance needs at least one variable name")
    hints = _type_hints(args.type)

    try:
        table = load_csv(_resolve_data(args.data), hints)
        part = partition(table, important)
    except (FileNotFoundError, IsADirectoryError, UnicodeDecodeError) as exc:
        raise DataError(str(exc)) from None
    if args.verbose and table.summary:
        for line in table.summary.lines():
            print(line, file=sys.stderr)

    if config.estimator.continuous:
        cats = [n for n in part.important + part.candidates if not table[n].is_numeric]
        if cats:
            raise UsageError(f"estimator {config.estimator} needs numeric variables; categorical: {', '.join(cats)}")

    def progress(step, m, name, score):
        print(f"step {step}/{m}: {name} ({score:.{args.digits}f})", file=sys.stderr)

    options = RenderOptions(format=args.output, digits=args.digits)
    with warnings.catch_warnings():
        if not args.verbose:
            warnings.simplefilter("ignore", RuntimeWarning)
        try:
            result = rank(table, part, config, progress=progress if args.verbose else None)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

        if args.bootstrap is None:
            if args.output == "text":
                text = render_summary(result, options)
            elif args.output == "json":
                text = json.dumps(result_to_json(result), indent=2) + "\n"
            else:
                text = render_heatmap(result, options)
            _emit(text, args.out)
            return EXIT_OK

        try:
            bconf = BootstrapConfig(parse_fractions(args.bootstrap), args.reps, args.seed, config)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        report = bootstrap_ranks(table, part, bconf)

    if args.output == "text":
        text = render_summary(result, options) + "\n" + report_to_text(report)
    elif args.output == "json":
        text = json.dumps(report.to_json(), indent=2) + "\n"
    else:
        text = render_parallel_coords(report, options)
    _emit(text, args.out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"mirank: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"mirank: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ComputeError as exc:
        print(f"mirank: compute error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
