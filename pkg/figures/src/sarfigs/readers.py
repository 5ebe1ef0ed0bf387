"""CSV and metadata-sidecar readers for the imaging toolkit's outputs.

The plotting side never recomputes physics: everything comes from the
files.  Image CSVs are row-major with x fastest; the sidecar carries the
grid, ordering note, k0 and functional parameters.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class FigureInputError(ValueError):
    """The input CSV or sidecar is missing or malformed."""


def read_sidecar(csv_path):
    side = Path(csv_path).with_suffix(".meta.json")
    if not side.exists():
        return {}
    try:
        return json.loads(side.read_text())
    except json.JSONDecodeError as exc:
        raise FigureInputError(f"malformed sidecar {side}: {exc}") from exc


def read_table(csv_path):
    """(header list, float ndarray) from a comma-separated file."""
    path = Path(csv_path)
    if not path.exists():
        raise FigureInputError(f"missing CSV: {path}")
    lines = path.read_text().strip().splitlines()
    if len(lines) < 2:
        raise FigureInputError(f"CSV has no data rows: {path}")
    header = lines[0].split(",")
    try:
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise FigureInputError(f"non-numeric cell in {path}: {exc}") from exc
    if data.shape[1] != len(header):
        raise FigureInputError(f"ragged CSV: {path}")
    return header, data


def read_image(csv_path):
    """Image values on their grid: (xs, ys, values (ny, nx), metadata)."""
    header, data = read_table(csv_path)
    meta = read_sidecar(csv_path)
    if header[:2] != ["x", "y"]:
        raise FigureInputError(f"not an image CSV (columns {header}): {csv_path}")
    if header[2:] == ["value_re", "value_im"]:
        values = data[:, 2] + 1j * data[:, 3]
    elif header[2:] == ["value"]:
        values = data[:, 2]
    else:
        raise FigureInputError(f"unexpected image columns {header}: {csv_path}")
    grid = meta.get("grid")
    if grid:
        nx, ny = (int(v) for v in grid["resolution"])
    else:
        nx = int(np.count_nonzero(data[:, 1] == data[0, 1]))
        ny = data.shape[0] // nx
    xs = data[:nx, 0]
    ys = data[::nx, 1]
    return xs, ys, values.reshape(ny, nx), meta
