"""Command-line interface: ``globalsnmf {bench,factorize,coords}``.

Exit codes: 0 success, 1 a ``--check`` failed, 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .baselines import IterativeConfig
from .bench import (
    check_report,
    parse_dataset,
    parse_method,
    parse_methods,
    parse_ranks,
    render_table,
    run_bench,
    write_report,
)
from .data import read_matrix, write_matrix
from .errors import FactorizationError
from .factorize import Method, factorize
from .svg import scatter_svg

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _iter_config(args) -> IterativeConfig:
    return IterativeConfig(max_iterations=args.iterations, restarts=args.restarts, seed=args.seed)


def _add_iterative(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--iterations", type=int, default=2000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="globalsnmf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="reconstruction-error table over ranks and methods")
    b.add_argument("--dataset", action="append", required=True,
                   help="wine | wine:<path> | synthetic:<m>x<n>:<seed> (repeatable)")
    b.add_argument("--ranks", required=True, help="a..b or comma list")
    b.add_argument("--methods", default="all", help="comma list or 'all'")
    _add_iterative(b)
    b.add_argument("--check", action="store_true", help="exit 1 if a golden or ordering check fails")
    b.add_argument("--out", default=None, help="directory for report.csv and report.json")
    b.add_argument("--convention", choices=("auto", "frobenius", "squared"), default="auto")
    b.add_argument("--timing", action="store_true", help="record wall time in the ms column")

    f = sub.add_parser("factorize", help="factor one matrix and write W.csv, H.csv")
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="matrix CSV file")
    src.add_argument("--dataset", help="dataset spec as for bench")
    f.add_argument("-k", "--rank", type=int, required=True)
    f.add_argument("--method", default=Method.CLOSED_FORM.value)
    f.add_argument("--out", default=".", help="output directory")
    _add_iterative(f)

    c = sub.add_parser("coords", help="per-sample coefficient coordinates (CSV, optional SVG)")
    c.add_argument("--dataset", default="wine")
    c.add_argument("-k", "--rank", type=int, required=True)
    c.add_argument("--method", default=Method.CLOSED_FORM.value)
    c.add_argument("--out", default=None, help="coordinates CSV (stdout if omitted)")
    c.add_argument("--svg", default=None, help="also write an SVG scatter (k must be 2 or 3)")
    _add_iterative(c)
    return parser


def cmd_bench(args) -> int:
    try:
        ranks = parse_ranks(args.ranks)
        methods = parse_methods(args.methods)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    datasets = [parse_dataset(s) for s in args.dataset]
    report = run_bench(datasets, ranks, methods, _iter_config(args),
                       convention=args.convention, timing=args.timing)
    sys.stdout.write(render_table(report))
    for r in report.rows:
        if r.failure:
            print(f"{r.dataset} k={r.k} {r.method} failed: {r.failure}", file=sys.stderr)
    if args.out:
        csv_path, _ = write_report(report, args.out)
        print(f"report written to {csv_path}")
    if args.check:
        failures = check_report(report)
        for msg in failures:
            print(f"CHECK FAILED: {msg}", file=sys.stderr)
        if failures:
            return EXIT_CHECK
        print("all checks passed")
    return EXIT_OK


def cmd_factorize(args) -> int:
    try:
        method = parse_method(args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.input:
        if not Path(args.input).is_file():
            raise FileNotFoundError(f"input file not found: {args.input}")
        X = read_matrix(args.input)
    else:
        X = parse_dataset(args.dataset).X
    f = factorize(X, args.rank, method, config=_iter_config(args))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_matrix(out / "W.csv", f.W)
    write_matrix(out / "H.csv", f.H)
    print(f"method={f.method.value} k={f.rank} error={f.error:.6f} "
          f"error_squared={f.error_squared:.6f} min_H={f.min_H_entry:.6g} iterations={f.iterations_used}")
    return EXIT_OK


def cmd_coords(args) -> int:
    if args.svg and args.rank not in (2, 3):
        raise UsageError("--svg needs k = 2 or 3")
    try:
        method = parse_method(args.method)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ds = parse_dataset(args.dataset)
    labels = ds.labels if ds.labels is not None else np.zeros(ds.X.shape[1], dtype=int)
    f = factorize(ds.X, args.rank, method, config=_iter_config(args))
    H = f.H
    rows = [["label"] + [f"h{i + 1}" for i in range(H.shape[0])]]
    rows += [[str(int(lab))] + [repr(float(v)) for v in H[:, j]] for j, lab in enumerate(labels)]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    finally:
        if args.out:
            fh.close()
    if args.svg:
        title = f"{ds.name} coefficients, k={args.rank}"
        Path(args.svg).write_text(scatter_svg(H.T, labels, title=title))
    tau = f.nonnegativity_threshold()
    print(f"min_H={f.min_H_entry:.6g} threshold={-tau:.6g}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"bench": cmd_bench, "factorize": cmd_factorize, "coords": cmd_coords}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, FactorizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
