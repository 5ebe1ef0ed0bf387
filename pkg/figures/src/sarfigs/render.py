"""The five figure kinds, each writing one image file plus a JSON record.

Figures are deterministic (fixed size and dpi) and regenerated purely from
the CSV/metadata files.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .readers import FigureInputError, read_image, read_sidecar, read_table

FIGSIZE = (6.0, 4.8)
DPI = 150


def _finish(fig, out_path, record):
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)
    record_path = out_path.with_suffix(out_path.suffix + ".json")
    record_path.write_text(json.dumps(record, sort_keys=True, indent=2) + "\n")
    return out_path


def render_contour(csv_path, out_path, k0_scale=False, clip_negative=False):
    """Filled contour of an image CSV; colorbar spans exactly the data range."""
    xs, ys, values, meta = read_image(csv_path)
    if np.iscomplexobj(values):
        values = np.abs(values)
    if clip_negative:
        values = np.clip(values, 0.0, None)
    vmin, vmax = float(values.min()), float(values.max())
    if k0_scale:
        k0 = meta.get("k0")
        if not k0:
            raise FigureInputError("k0 scaling requested but sidecar has no k0")
        cx, cy = (np.median(xs), np.median(ys))
        grid = meta.get("grid")
        if grid:
            cx, cy = grid["center"]
        px, py = k0 * (xs - cx), k0 * (ys - cy)
        xlabel, ylabel = "k0 (x - x0)", "k0 (y - y0)"
    else:
        px, py = xs, ys
        xlabel, ylabel = "x [m]", "y [m]"
    fig, ax = plt.subplots(figsize=FIGSIZE)
    if vmax == vmin:
        vmax = vmin + 1.0
    levels = np.linspace(vmin, vmax, 41)
    cs = ax.contourf(px, py, values, levels=levels, cmap="viridis")
    cbar = fig.colorbar(cs, ax=ax, ticks=np.linspace(vmin, vmax, 6))
    cbar.set_label(meta.get("functional", "value"))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    title = meta.get("preset", "")
    if meta.get("epsilon") is not None:
        title += f"  eps={meta['epsilon']:g}"
    ax.set_title(title.strip())
    return _finish(fig, out_path, {
        "kind": "contour", "input": str(csv_path),
        "colorbar_min": vmin, "colorbar_max": float(values.max()),
        "k0_scaled": bool(k0_scale),
    })


def render_loglog(csv_path, out_path, fits_csv=None):
    """Measured widths against the sweep variable with fitted lines."""
    header, data = read_table(csv_path)
    meta = read_sidecar(csv_path)
    xcol = header[0]
    xs = data[:, 0]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    series = {}
    for j, name in enumerate(header[1:], start=1):
        style = "o" if name.endswith("_x") else "x"
        if name.startswith("theory"):
            ax.plot(xs, data[:, j], "k--", lw=0.8, label=name)
        else:
            ax.plot(xs, data[:, j], style, label=name)
            series[name] = j
    fits = {}
    if fits_csv:
        lines = Path(fits_csv).read_text().strip().splitlines()
        for line in lines[1:]:
            quantity, against, intercept, slope = line.split(",")
            fits[quantity] = (float(intercept), float(slope))
            if quantity in series:
                ax.plot(xs, np.exp(float(intercept)) * xs ** float(slope),
                        "-", lw=1.0, label=f"{quantity} fit, slope {float(slope):.3f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(xcol)
    ax.set_ylabel("width at half maximum [m]")
    ax.legend(fontsize=8)
    ax.set_title(meta.get("preset", ""))
    return _finish(fig, out_path, {
        "kind": "loglog", "input": str(csv_path), "fits": fits,
    })


def render_slices(csv_path, out_path):
    """1-D profile through the target: value, or real and imaginary parts."""
    header, data = read_table(csv_path)
    meta = read_sidecar(csv_path)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    offsets = data[:, 0]
    if header[1:] == ["value_re", "value_im"]:
        ax.plot(offsets, data[:, 1], "b-", label="real")
        ax.plot(offsets, data[:, 2], "r-", label="imag")
        ax.legend(fontsize=8)
    elif header[1:] == ["value"]:
        ax.plot(offsets, data[:, 1], "b-")
    else:
        raise FigureInputError(f"unexpected slice columns {header}: {csv_path}")
    ax.set_xlabel(f"offset along {meta.get('axis', 'axis')} [m]")
    ax.set_ylabel(meta.get("functional", "value"))
    ax.set_title(meta.get("preset", ""))
    ax.grid(alpha=0.3)
    return _finish(fig, out_path, {"kind": "slices", "input": str(csv_path)})


def render_spectrum(csv_path, out_path):
    """All blocks' singular values, sorted descending, with thresholding."""
    header, data = read_table(csv_path)
    meta = read_sidecar(csv_path)
    if header != ["block", "index", "sigma", "thresholded"]:
        raise FigureInputError(f"unexpected spectrum columns {header}: {csv_path}")
    order = np.argsort(data[:, 2])[::-1]
    sigma = data[order, 2]
    thresholded = np.sort(data[:, 3])[::-1]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    idx = np.arange(1, len(sigma) + 1)
    ax.semilogy(idx, sigma, "b-", label="singular values")
    ax.semilogy(idx, thresholded, "r--", label="thresholded")
    ax.set_xlabel("index")
    ax.set_ylabel("singular value")
    ax.legend(fontsize=8)
    ax.set_title(meta.get("preset", ""))
    return _finish(fig, out_path, {"kind": "spectrum", "input": str(csv_path)})


def render_stability(csv_path, out_path):
    """Curves of a y-quantity against the first column, one per series.

    Handles both wide tables (x, series...) and the long (x, epsilon, y)
    layout of the recovery-error sweep.
    """
    header, data = read_table(csv_path)
    meta = read_sidecar(csv_path)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    xcol = header[0]
    if len(header) == 3 and header[1] == "epsilon":
        for eps in np.unique(data[:, 1]):
            mask = data[:, 1] == eps
            ax.semilogy(data[mask, 0], data[mask, 2], "o-", label=f"eps={eps:g}")
        ax.set_ylabel(header[2])
    else:
        for j, name in enumerate(header[1:], start=1):
            ax.loglog(data[:, 0], data[:, j], "o-", label=name)
        ax.set_ylabel("image SNR")
        ax.set_xlabel(xcol)
    ax.set_xlabel(xcol)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3, which="both")
    ax.set_title(meta.get("preset", ""))
    return _finish(fig, out_path, {"kind": "stability", "input": str(csv_path)})


RENDERERS = {
    "contour": render_contour,
    "loglog": render_loglog,
    "slices": render_slices,
    "spectrum": render_spectrum,
    "stability": render_stability,
}


def infer_kind(csv_path):
    """Figure kind from the file-name conventions of the experiment outputs."""
    name = Path(csv_path).name
    if name.startswith("image_"):
        return "contour"
    if name.startswith("slice_"):
        return "slices"
    if name.startswith("spectra"):
        return "spectrum"
    if name.startswith(("stability", "snr_error")):
        return "stability"
    if name.startswith("resolution"):
        return "loglog"
    return None
