"""CSV and JSON persistence for datasets and graphs.

CSV files carry a header row of variable names followed by numeric rows.
Floats are written with 17 significant digits so a save/load round trip
reproduces every float64 bit-exactly. Graphs travel as JSON objects with the
node count and an explicit edge list.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import FormatError


@dataclass
class CsvDataset:
    header: list
    X: np.ndarray


def load_csv(path) -> CsvDataset:
    """Parse a headered numeric CSV file. Line and column numbers are 1-based."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    rows = [r for r in rows if r]  # csv yields [] for blank trailing lines
    if not rows:
        raise FormatError(f"{path}: empty file")
    header = [name.strip() for name in rows[0]]
    d = len(header)
    if d < 1 or any(not name for name in header):
        raise FormatError(f"{path}: malformed header", line=1)
    data = np.empty((len(rows) - 1, d))
    for ln, row in enumerate(rows[1:], start=2):
        if len(row) != d:
            raise FormatError(
                f"{path}: line {ln} has {len(row)} fields, expected {d}", line=ln
            )
        for col, cell in enumerate(row, start=1):
            try:
                value = float(cell)
            except ValueError:
                value = np.nan
            if not np.isfinite(value):
                raise FormatError(
                    f"{path}: non-numeric value {cell.strip()!r} at line {ln}, column {col}",
                    line=ln,
                    column=col,
                )
            data[ln - 2, col - 1] = value
    return CsvDataset(header=header, X=data)


def save_csv(path, X, header=None):
    """Write a data matrix as headered CSV with round-trippable floats."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise FormatError("save_csv expects an n x d matrix")
    d = X.shape[1]
    if header is None:
        header = [f"x{j}" for j in range(d)]
    if len(header) != d:
        raise FormatError(f"header has {len(header)} names for {d} columns")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in X:
            writer.writerow([format(v, ".17g") for v in row])


def save_graph(path, W):
    """Write a (possibly weighted) adjacency matrix as {"d", "edges"} JSON."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise FormatError("save_graph expects a square matrix")
    d = W.shape[0]
    edges = [
        [int(i), int(j), float(W[i, j])]
        for i in range(d)
        for j in range(d)
        if W[i, j] != 0.0
    ]
    with open(path, "w") as fh:
        json.dump({"d": d, "edges": edges}, fh, sort_keys=True)
        fh.write("\n")


def load_graph(path):
    """Read a {"d", "edges"} JSON graph back into a dense float matrix."""
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict) or "d" not in obj or "edges" not in obj:
        raise FormatError(f"{path}: graph JSON needs 'd' and 'edges' keys")
    d = obj["d"]
    if not isinstance(d, int) or d < 1:
        raise FormatError(f"{path}: node count must be a positive integer")
    W = np.zeros((d, d))
    for k, edge in enumerate(obj["edges"]):
        try:
            i, j, w = edge
            i, j, w = int(i), int(j), float(w)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{path}: malformed edge at index {k}: {edge!r}") from exc
        if not (0 <= i < d and 0 <= j < d) or i == j:
            raise FormatError(f"{path}: edge ({i}, {j}) invalid for d={d}")
        if not np.isfinite(w):
            raise FormatError(f"{path}: non-finite weight on edge ({i}, {j})")
        W[i, j] = w
    return W


def save_dataset(outdir, dataset):
    """Write X.csv, W.json, B.json, and provenance.json for a simulated dataset."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    save_csv(out / "X.csv", dataset.X)
    save_graph(out / "W.json", dataset.W)
    save_graph(out / "B.json", dataset.B)
    with open(out / "provenance.json", "w") as fh:
        json.dump(dataset.provenance, fh, sort_keys=True)
        fh.write("\n")
    return out
