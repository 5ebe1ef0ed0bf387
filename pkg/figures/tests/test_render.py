import json
from pathlib import Path

import numpy as np
import pytest

from sarfigs import infer_kind, read_image
from sarfigs.cli import main
from sarfigs.readers import FigureInputError
from sarfigs.render import render_contour, render_loglog, render_slices


def write_csv(path, header, rows, meta=None):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")
    if meta is not None:
        Path(path).with_suffix(".meta.json").write_text(json.dumps(meta))


@pytest.fixture
def image_csv(tmp_path):
    xs = np.linspace(-1, 1, 9)
    ys = np.linspace(-0.5, 0.5, 7)
    rows = []
    for y in ys:
        for x in xs:
            rows.append((x, y, np.exp(-(x**2 + (y / 0.3) ** 2))))
    path = tmp_path / "image_inv_f.csv"
    meta = {
        "grid": {"center": [0.0, 0.0], "extent": [2.0, 1.0], "resolution": [9, 7],
                 "ordering": "row-major, x fastest"},
        "k0": 2.0,
        "functional": "inv_f",
        "preset": "fixture",
        "epsilon": 1e-8,
    }
    write_csv(path, ["x", "y", "value"], rows, meta)
    return path


def test_contour_render_and_record(tmp_path, image_csv):
    out = tmp_path / "fig.png"
    assert main(["contour", "--csv", str(image_csv), "--out", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 0
    record = json.loads((tmp_path / "fig.png.json").read_text())
    xs, ys, values, _ = read_image(image_csv)
    assert record["colorbar_max"] == pytest.approx(values.max(), rel=1e-12)


def test_contour_k0_scale(tmp_path, image_csv):
    out = tmp_path / "fig_k0.png"
    assert main(["contour", "--csv", str(image_csv), "--out", str(out), "--k0-scale"]) == 0
    assert json.loads((tmp_path / "fig_k0.png.json").read_text())["k0_scaled"] is True


def test_missing_csv_exit_code(tmp_path, capsys):
    code = main(["contour", "--csv", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o.png")])
    assert code == 2
    assert "nope.csv" in capsys.readouterr().err


def test_malformed_csv(tmp_path):
    bad = tmp_path / "image_bad.csv"
    bad.write_text("x,y,value\n1,2,abc\n")
    with pytest.raises(FigureInputError):
        render_contour(bad, tmp_path / "o.png")


def test_loglog_with_fit_overlay(tmp_path):
    xs = np.array([1e-10, 1e-8, 1e-6])
    res = tmp_path / "resolution.csv"
    write_csv(
        res,
        ["epsilon", "fwhm_x", "theory_x", "fwhm_y", "theory_y"],
        [(x, 53 * np.sqrt(x), 53 * np.sqrt(x), 0.58 * np.sqrt(x), 0.58 * np.sqrt(x)) for x in xs],
        {"preset": "fixture"},
    )
    fits = tmp_path / "fits.csv"
    fits.write_text(
        "quantity,against,intercept,slope\n"
        "fwhm_x,epsilon,3.97,0.5\nfwhm_y,epsilon,-0.547,0.5\n"
    )
    out = tmp_path / "fig.png"
    assert main(["loglog", "--csv", str(res), "--fits", str(fits), "--out", str(out)]) == 0
    record = json.loads((tmp_path / "fig.png.json").read_text())
    assert record["fits"]["fwhm_x"] == [3.97, 0.5]


def test_slices_complex(tmp_path):
    path = tmp_path / "slice_inv_r_range.csv"
    offs = np.linspace(-0.01, 0.01, 21)
    write_csv(path, ["offset", "value_re", "value_im"],
              [(o, np.cos(o * 500), np.sin(o * 500)) for o in offs],
              {"axis": "range", "functional": "inv_r", "preset": "fixture"})
    out = tmp_path / "fig.png"
    assert main(["slices", "--csv", str(path), "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_spectrum(tmp_path):
    rows = []
    for block in range(3):
        sig = [2.0, 0.4, 1e-5]
        for j, s in enumerate(sig):
            thr = s if s >= 0.01 * sig[0] else 1e-8 * sig[0]
            rows.append((block, j + 1, s, thr))
    path = tmp_path / "spectra_snr88.csv"
    write_csv(path, ["block", "index", "sigma", "thresholded"], rows, {"preset": "fixture"})
    out = tmp_path / "fig.png"
    assert main(["spectrum", "--csv", str(path), "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_stability_wide_and_long(tmp_path):
    wide = tmp_path / "stability_vs_epsilon.csv"
    write_csv(wide, ["epsilon", "snr_inv_f", "snr_sar", "snr_cint"],
              [(0.02, 28, 0.07, 1.0), (0.2, 36, 0.07, 1.0), (0.8, 161, 0.07, 1.0)],
              {"preset": "fixture"})
    assert main(["stability", "--csv", str(wide), "--out", str(tmp_path / "w.png")]) == 0
    long = tmp_path / "snr_error.csv"
    write_csv(long, ["snr_db", "epsilon", "e_rel"],
              [(s, e, 10 ** (-s / 40) / e**0.1) for s in (40, 80, 120) for e in (1e-8, 1e-6)],
              {"preset": "fixture"})
    assert main(["stability", "--csv", str(long), "--out", str(tmp_path / "l.png")]) == 0


def test_infer_kind():
    assert infer_kind("image_inv_f_1em08.csv") == "contour"
    assert infer_kind("slice_range_1em08.csv") == "slices"
    assert infer_kind("spectra_snr88.csv") == "spectrum"
    assert infer_kind("stability_vs_sigma_tilde.csv") == "stability"
    assert infer_kind("resolution.csv") == "loglog"
    assert infer_kind("recovery.csv") is None


def test_deterministic_rerender(tmp_path, image_csv):
    out1 = tmp_path / "a.png"
    out2 = tmp_path / "b.png"
    render_contour(image_csv, out1)
    render_contour(image_csv, out2)
    assert out1.read_bytes() == out2.read_bytes()
