"""File formats: cube containers, image CSVs and metadata sidecars.

Every CSV gets a header row and a ``<name>.meta.json`` sidecar.  Floats are
written with shortest round-trip formatting so reruns with the same seed
produce byte-identical files.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .forward import DataCube
from .geometry import AcquisitionConfig, GridSpec, build_geometry, grid_points
from .imaging import ImageGrid


def _fmt(value):
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    return str(value)


def geometry_hash(config: AcquisitionConfig) -> str:
    payload = json.dumps(dataclasses.asdict(config), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def save_cube(cube: DataCube, path):
    """Lossless binary container: values, grids and provenance."""
    cfg = cube.geometry.config
    np.savez(
        path,
        values=cube.values,
        frequencies=cube.geometry.frequencies,
        positions=cube.geometry.positions,
        config=json.dumps(dataclasses.asdict(cfg), sort_keys=True),
        provenance=json.dumps(cube.provenance, sort_keys=True, default=str),
    )


def load_cube(path) -> DataCube:
    with np.load(path, allow_pickle=False) as data:
        cfg = AcquisitionConfig(**json.loads(str(data["config"])))
        geom = build_geometry(cfg)
        if not np.array_equal(data["frequencies"], geom.frequencies):
            raise ValueError("stored frequency grid disagrees with geometry header")
        if not np.array_equal(data["positions"], geom.positions):
            raise ValueError("stored positions disagree with geometry header")
        return DataCube(
            values=data["values"],
            geometry=geom,
            provenance=json.loads(str(data["provenance"])),
        )


def write_sidecar(csv_path, metadata):
    side = Path(csv_path).with_suffix(".meta.json")
    payload = dict(metadata)
    payload.setdefault("code_version", __version__)
    side.write_text(json.dumps(payload, sort_keys=True, indent=2, default=_fmt) + "\n")
    return side


def write_rows_csv(path, header, rows, metadata=None):
    """Generic measurement CSV plus sidecar; returns the CSV path."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    write_sidecar(path, metadata or {})
    return path


def write_image_csv(image: ImageGrid, path, metadata=None):
    """Image CSV with columns x,y,value or x,y,value_re,value_im."""
    path = Path(path)
    pts = grid_points(image.spec)
    meta = dict(image.metadata)
    if metadata:
        meta.update(metadata)
    meta["grid"] = {
        "center": list(image.spec.center),
        "extent": list(image.spec.extent),
        "resolution": list(image.spec.resolution),
        "ordering": "row-major, x fastest",
    }
    if np.iscomplexobj(image.values):
        header = ["x", "y", "value_re", "value_im"]
        rows = (
            (pts[i, 0], pts[i, 1], image.values[i].real, image.values[i].imag)
            for i in range(pts.shape[0])
        )
    else:
        header = ["x", "y", "value"]
        rows = ((pts[i, 0], pts[i, 1], image.values[i]) for i in range(pts.shape[0]))
    return write_rows_csv(path, header, rows, meta)


def read_image_csv(path) -> ImageGrid:
    path = Path(path)
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    meta = json.loads(path.with_suffix(".meta.json").read_text())
    g = meta["grid"]
    spec = GridSpec(
        center=tuple(g["center"]), extent=tuple(g["extent"]),
        resolution=tuple(int(v) for v in g["resolution"]),
    )
    if header[2:] == ["value_re", "value_im"]:
        values = data[:, 2] + 1j * data[:, 3]
    else:
        values = data[:, 2]
    return ImageGrid(spec=spec, values=values, metadata=meta)


def write_spectra_csv(path, svd, epsilon, tau_gap, metadata=None):
    from .subspace import spectrum_rows

    rows = spectrum_rows(svd, epsilon, tau_gap)
    meta = {"epsilon": epsilon, "tau_gap": tau_gap}
    if metadata:
        meta.update(metadata)
    return write_rows_csv(path, ["block", "index", "sigma", "thresholded"], rows, meta)
