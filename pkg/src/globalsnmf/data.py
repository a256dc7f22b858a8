"""Datasets and the plain matrix CSV format.

``wine.data`` follows the UCI layout: 178 lines, each ``label,f1,...,f13`` with
the class label in 1..3.  A copy ships with the package (see
:func:`bundled_wine_path`).

Matrix CSV: one matrix row per line, comma separated, values written with
``repr`` so a round trip is exact.  An optional first line ``# m,n`` declares
the shape and is checked against the body.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError

WINE_ROWS = 13
WINE_SAMPLES = 178


@dataclass(frozen=True)
class LabeledDataset:
    data: np.ndarray  # features x samples
    labels: np.ndarray
    name: str

    def __post_init__(self):
        if self.labels.shape[0] != self.data.shape[1]:
            raise ValueError("label count must equal the number of columns")

    @property
    def classes(self):
        return np.unique(self.labels)


def bundled_wine_path() -> Path:
    return Path(str(resources.files("globalsnmf") / "data" / "wine.data"))


def load_wine(path=None) -> LabeledDataset:
    """Parse a UCI ``wine.data`` file into a 13 x 178 matrix of raw features."""
    path = bundled_wine_path() if path is None else Path(path)
    text = path.read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    labels, cols = [], []
    for lineno, line in enumerate(lines, start=1):
        fields = line.split(",")
        if len(fields) != WINE_ROWS + 1:
            raise ParseError(f"expected {WINE_ROWS + 1} fields, found {len(fields)}", line=lineno)
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", line=lineno) from None
        if not values[0].is_integer():
            raise ParseError(f"class label {fields[0]!r} is not an integer", line=lineno)
        labels.append(int(values[0]))
        cols.append(values[1:])
    if len(lines) != WINE_SAMPLES:
        raise ParseError(
            f"expected {WINE_SAMPLES} samples, file ends after {len(lines)}", line=len(lines) + 1
        )
    X = np.array(cols, dtype=np.float64).T
    if not np.all(np.isfinite(X)):
        raise ParseError("non-finite feature value")
    return LabeledDataset(data=np.ascontiguousarray(X), labels=np.array(labels), name="wine")


def synthetic_nonnegative(m=4, n=10, seed=0, scale=10.0) -> np.ndarray:
    """I.i.d. uniform entries on ``[0, scale)`` from numpy's PCG64 bit generator.

    PCG64 with a fixed integer seed is platform independent, so the same seed
    gives the same matrix everywhere.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    X = rng.random((m, n)) * scale
    # float rounding of u * scale may land exactly on scale
    return np.minimum(X, np.nextafter(scale, 0.0))


def write_matrix(path, X, header=False) -> None:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    out = []
    if header:
        out.append(f"# {X.shape[0]},{X.shape[1]}")
    for row in X:
        out.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(out) + "\n")


def read_matrix(path) -> np.ndarray:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    numbered = [(i, ln) for i, ln in enumerate(lines, start=1) if ln]
    if not numbered:
        raise ParseError("empty matrix file")
    shape = None
    first_no, first = numbered[0]
    if first.startswith("#"):
        first = first.lstrip("#").strip()
        shape = _parse_shape(first, first_no)
        numbered = numbered[1:]
    rows = []
    width = None
    for lineno, ln in numbered:
        cells = ln.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(f"ragged row: {len(cells)} cells, expected {width}", line=lineno)
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            raise ParseError(f"non-numeric cell in {ln!r}", line=lineno) from None
    if not rows:
        raise ParseError("matrix file has a header but no rows")
    X = np.array(rows, dtype=np.float64)
    if shape is not None and X.shape != shape:
        raise ParseError(f"header declares shape {shape}, body has {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ParseError("non-finite matrix entry")
    return X


def _parse_shape(text, lineno):
    try:
        m, n = (int(v) for v in text.split(","))
    except ValueError:
        raise ParseError(f"bad shape header {text!r}", line=lineno) from None
    return m, n
