"""Input loaders: CSV point clouds and JSON distance matrices."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from netcube.metric import FiniteMetricSpace


def load_points_csv(path) -> FiniteMetricSpace:
    """One row per point: id,x1,...,xd; a non-numeric first row is a header."""
    rows = []
    labels = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader):
            row = [cell.strip() for cell in row if cell.strip() != ""]
            if not row:
                continue
            try:
                coords = [float(c) for c in row[1:]]
            except ValueError:
                if lineno == 0:
                    continue  # header
                raise ValueError(f"{path}: non-numeric coordinate on line {lineno + 1}")
            if len(row) < 2:
                raise ValueError(f"{path}: row {lineno + 1} has no coordinates")
            labels.append(row[0])
            rows.append(coords)
    if not rows:
        raise ValueError(f"{path}: no points found")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: inconsistent coordinate dimensions {sorted(widths)}")
    return FiniteMetricSpace.from_points(np.asarray(rows), labels=labels)


def load_matrix_json(path) -> FiniteMetricSpace:
    """JSON object {"n": N, "d": [[...]]} with a row-major full matrix."""
    obj = json.loads(Path(path).read_text())
    if "n" not in obj or "d" not in obj:
        raise ValueError(f"{path}: expected keys 'n' and 'd'")
    n = int(obj["n"])
    d = np.asarray(obj["d"], dtype=np.float64)
    if d.shape != (n, n):
        raise ValueError(f"{path}: matrix shape {d.shape} does not match n={n}")
    return FiniteMetricSpace.from_matrix(d)
