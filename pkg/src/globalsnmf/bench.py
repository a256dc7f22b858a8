"""Reconstruction-error benchmark over datasets, ranks and methods."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .baselines import IterativeConfig
from .data import load_wine, synthetic_nonnegative
from .factorize import Method, factorize

# Published reference errors (unsquared Frobenius norm on raw features).
PUBLISHED_ERRORS = {
    Method.NMF: {
        "S": [10.610657, 4.859226, 2.206831],
        "Wine": [498.520935, 70.140053, 40.666626, 28.695702, 21.401932, 14.900063, 9.568855],
    },
    Method.SEMINMF_ITERATIVE: {
        "S": [10.610657, 4.665386, 4.748131],
        "Wine": [498.520935, 172.181091, 73.077126, 70.092888, 69.924767, 69.265709, 69.638557],
    },
    Method.CLOSED_FORM: {
        "S": [10.610657, 4.653841, 2.167300],
        "Wine": [498.520935, 70.140083, 40.664982, 27.342697, 20.094454, 13.950203, 8.533113],
    },
}
GOLDEN_RTOL = 1e-3
ORDER_RTOL = 1e-3
TABLE_METHODS = (Method.NMF, Method.SEMINMF_ITERATIVE, Method.CLOSED_FORM)
REPORT_HEADER = ("dataset", "k", "method", "error", "error_squared", "min_H", "iterations", "ms")


@dataclass(frozen=True)
class Dataset:
    spec: str
    name: str
    X: np.ndarray
    labels: np.ndarray | None = None

    @property
    def is_wine(self) -> bool:
        return self.name == "wine"


def parse_dataset(spec: str) -> Dataset:
    """``wine``, ``wine:<path>`` or ``synthetic:<m>x<n>:<seed>``."""
    kind, _, rest = spec.partition(":")
    if kind == "wine":
        ds = load_wine(rest or None)
        return Dataset(spec=spec, name="wine", X=ds.data, labels=ds.labels)
    if kind == "synthetic":
        try:
            dims, _, seed = rest.partition(":")
            m, n = (int(v) for v in dims.lower().split("x"))
            seed = int(seed)
        except ValueError:
            raise ValueError(f"bad synthetic dataset spec {spec!r}; expected synthetic:<m>x<n>:<seed>") from None
        return Dataset(spec=spec, name=f"synthetic-{m}x{n}-seed{seed}", X=synthetic_nonnegative(m, n, seed))
    raise ValueError(f"unknown dataset spec {spec!r}")


def parse_ranks(text: str) -> list[int]:
    text = text.strip()
    if not text:
        raise ValueError("empty rank list")
    if ".." in text:
        a, _, b = text.partition("..")
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ValueError(f"empty rank range {text!r}")
        ranks = list(range(lo, hi + 1))
    else:
        ranks = [int(t) for t in text.split(",") if t.strip()]
    if not ranks or min(ranks) < 1:
        raise ValueError(f"ranks must be positive integers, got {text!r}")
    return ranks


_ALIASES = {
    "closed": Method.CLOSED_FORM,
    "closed-form": Method.CLOSED_FORM,
    "nmf": Method.NMF,
    "iterative": Method.SEMINMF_ITERATIVE,
    "semi-nmf": Method.SEMINMF_ITERATIVE,
}


def parse_method(name: str) -> Method:
    return _ALIASES.get(name, None) or Method.parse(name)


def parse_methods(text: str) -> list[Method]:
    if text.strip() == "all":
        return list(TABLE_METHODS)
    methods = [parse_method(t.strip()) for t in text.split(",") if t.strip()]
    if not methods:
        raise ValueError("empty method list")
    return methods


def metric_convention_oracle(wine_path=None) -> dict:
    """Decide which norm convention the published Wine:1 value uses.

    Computes the closed-form rank-1 error on raw Wine under both conventions
    and returns the one within 1e-3 relative of the published number.
    """
    X = load_wine(wine_path).data
    f = factorize(X, 1, Method.CLOSED_FORM)
    golden = PUBLISHED_ERRORS[Method.CLOSED_FORM]["Wine"][0]
    candidates = {"frobenius": f.error, "squared": f.error_squared}
    matches = [c for c, v in candidates.items() if abs(v - golden) <= GOLDEN_RTOL * golden]
    if len(matches) != 1:
        raise RuntimeError(f"metric oracle is inconclusive: {candidates} vs {golden}")
    return {"convention": matches[0], "golden": golden, **candidates}


@dataclass(frozen=True)
class BenchRow:
    dataset: str
    k: int
    method: str
    error: float
    error_squared: float
    min_H_entry: float
    iterations: int
    wall_time_ms: float | None = None
    failure: str | None = None


@dataclass
class BenchReport:
    rows: list[BenchRow]
    convention: str
    environment: dict = field(default_factory=dict)

    def value(self, row: BenchRow) -> float:
        return row.error if self.convention == "frobenius" else row.error_squared

    def groups(self):
        out = {}
        for r in self.rows:
            out.setdefault((r.dataset, r.k), {})[r.method] = r
        return out


def run_bench(datasets, ranks, methods, config: IterativeConfig | None = None,
              convention="auto", timing=False) -> BenchReport:
    """Run every (dataset, rank, method) cell and collect the errors.

    Cells that raise are recorded with NaN errors and the exception text,
    so one failing method does not hide the others.
    """
    config = config or IterativeConfig()
    env = {
        "seed": config.seed,
        "restarts": config.restarts,
        "max_iterations": config.max_iterations,
        "tolerance": config.tolerance,
        "epsilon_guard": config.epsilon_guard,
        "rng": "numpy PCG64 via SeedSequence(seed).spawn(restarts)",
    }
    if convention == "auto":
        oracle = metric_convention_oracle()
        convention = oracle["convention"]
        env["metric_oracle"] = oracle
    elif convention not in ("frobenius", "squared"):
        raise ValueError(f"unknown convention {convention!r}")

    rows = []
    for ds in datasets:
        for k in ranks:
            for method in methods:
                t0 = time.perf_counter()
                try:
                    f = factorize(ds.X, k, method, config=config)
                    row = dict(error=f.error, error_squared=f.error_squared,
                               min_H_entry=f.min_H_entry, iterations=f.iterations_used, failure=None)
                except Exception as exc:  # recorded, surfaced by check_report
                    row = dict(error=float("nan"), error_squared=float("nan"),
                               min_H_entry=float("nan"), iterations=0,
                               failure=f"{type(exc).__name__}: {exc}")
                ms = (time.perf_counter() - t0) * 1000.0 if timing else None
                rows.append(BenchRow(dataset=ds.name, k=k, method=Method.parse(method).value,
                                     wall_time_ms=ms, **row))
    return BenchReport(rows=rows, convention=convention, environment=env)


def check_report(report: BenchReport) -> list[str]:
    """Golden and ordering checks; returns a list of failure messages."""
    failures = []
    for (dataset, k), cells in report.groups().items():
        for r in cells.values():
            if r.failure:
                failures.append(f"{dataset} k={k} {r.method}: {r.failure}")
        closed = cells.get(Method.CLOSED_FORM.value)
        if closed is None or closed.failure:
            continue
        cval = report.value(closed)
        golden = PUBLISHED_ERRORS[Method.CLOSED_FORM]["Wine"]
        if dataset == "wine" and k <= len(golden):
            g = golden[k - 1] if report.convention == "frobenius" else golden[k - 1] ** 2
            if abs(cval - g) > GOLDEN_RTOL * g:
                failures.append(f"wine k={k}: closed-form {cval:.6f} vs published {g:.6f}")
        for name, r in cells.items():
            if name == closed.method or r.failure:
                continue
            bval = report.value(r)
            if cval > bval * (1 + ORDER_RTOL) + 1e-9:
                failures.append(f"{dataset} k={k}: closed-form {cval:.6f} exceeds {name} {bval:.6f}")
    return failures


def _label(dataset, k):
    if dataset == "wine":
        return f"Wine:{k}"
    if dataset.startswith("synthetic"):
        return f"S:{k}"
    return f"{dataset}:{k}"


def render_table(report: BenchReport) -> str:
    methods = []
    for r in report.rows:
        if r.method not in methods:
            methods.append(r.method)
    groups = report.groups()
    head = ["Data"] + methods
    body = []
    for (dataset, k), cells in groups.items():
        line = [_label(dataset, k)]
        for m in methods:
            r = cells.get(m)
            line.append("-" if r is None else ("failed" if r.failure else f"{report.value(r):.6f}"))
        body.append(line)
    widths = [max(len(row[i]) for row in [head] + body) for i in range(len(head))]
    sep = "+" + "+".join("-" * (w + 2) for w in widths) + "+"

    def fmt(row):
        return "| " + " | ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(row, widths))) + " |"

    lines = [f"Reconstruction error ({report.convention})", sep, fmt(head), sep]
    lines += [fmt(r) for r in body]
    lines.append(sep)
    return "\n".join(lines) + "\n"


def report_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_HEADER)
    for r in report.rows:
        w.writerow([
            r.dataset, r.k, r.method, repr(r.error), repr(r.error_squared), repr(r.min_H_entry),
            r.iterations, "" if r.wall_time_ms is None else f"{r.wall_time_ms:.3f}",
        ])
    return buf.getvalue()


def read_report_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_report(report: BenchReport, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "report.csv"
    csv_path.write_text(report_csv(report))
    meta = {
        "convention": report.convention,
        "environment": report.environment,
        "failures": [asdict(r) for r in report.rows if r.failure],
    }
    json_path = out / "report.json"
    json_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return csv_path, json_path
