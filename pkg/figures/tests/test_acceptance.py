"""Secondary acceptance: every preset's output renders to a nonzero image,
and the fig3 contour colorbar maximum equals the CSV maximum to 3
significant figures.  Runs the primary CLI at reduced scale."""

import json
from pathlib import Path

import numpy as np
import pytest

pronysar_cli = pytest.importorskip("pronysar.cli")

from sarfigs import infer_kind, read_image
from sarfigs.cli import main as figs_main

REDUCED = {
    "fig10-stability": ["--realizations", "4"],
    "fig12-4targets": ["--realizations", "4"],
}


@pytest.fixture(scope="module")
def preset_outputs(tmp_path_factory):
    from pronysar.presets import PRESETS

    root = tmp_path_factory.mktemp("presets")
    small_grid = root / "small_grid.ini"
    small_grid.write_text("[grid]\nresolution = 21 21\n")
    outputs = {}
    for name in PRESETS:
        out = root / name
        argv = ["run", "--preset", name, "--seed", "11", "--out", str(out)]
        argv += REDUCED.get(name, [])
        if name in ("fig3", "fig8-3targets", "fig8-snr-spectra"):
            argv += ["--config", str(small_grid)]
        assert pronysar_cli.main(argv) == 0, name
        outputs[name] = out
    return outputs


def test_every_preset_output_renders(preset_outputs, tmp_path):
    rendered = 0
    for name, out_dir in preset_outputs.items():
        per_preset = 0
        for csv in sorted(Path(out_dir).glob("*.csv")):
            kind = infer_kind(csv)
            if kind is None:
                continue
            target = tmp_path / name / (csv.stem + ".png")
            argv = [kind, "--csv", str(csv), "--out", str(target)]
            if kind == "loglog" and (out_dir / "fits.csv").exists():
                argv += ["--fits", str(out_dir / "fits.csv")]
            assert figs_main(argv) == 0, csv
            assert target.exists() and target.stat().st_size > 0
            per_preset += 1
        assert per_preset > 0, f"{name} produced no renderable output"
        rendered += per_preset
    print(f"\nACCEPTANCE rendered {rendered} figures across {len(preset_outputs)} presets")


def test_fig3_colorbar_matches_csv_max(preset_outputs, tmp_path):
    out_dir = preset_outputs["fig3"]
    csv = next(Path(out_dir).glob("image_inv_f_*.csv"))
    target = tmp_path / "fig3_contour.png"
    assert figs_main(["contour", "--csv", str(csv), "--out", str(target), "--k0-scale"]) == 0
    record = json.loads((tmp_path / "fig3_contour.png.json").read_text())
    _, _, values, _ = read_image(csv)
    csv_max = float(np.max(values))

    def sig3(v):
        return float(f"{v:.3g}")

    print(f"\nACCEPTANCE fig3 colorbar max {record['colorbar_max']:.6g} vs CSV max {csv_max:.6g}")
    assert sig3(record["colorbar_max"]) == sig3(csv_max)
