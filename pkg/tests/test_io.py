import json

import numpy as np
import pytest

from pronysar import GridSpec, ImageGrid, add_noise, simulate_born
from pronysar.io import (
    load_cube,
    read_image_csv,
    save_cube,
    write_image_csv,
    write_rows_csv,
)


def test_cube_round_trip(tmp_path, gotcha_geom, three_targets):
    cube = add_noise(simulate_born(three_targets, gotcha_geom), 40.0, seed=5)
    path = tmp_path / "cube.npz"
    save_cube(cube, path)
    loaded = load_cube(path)
    np.testing.assert_array_equal(loaded.values, cube.values)
    np.testing.assert_array_equal(loaded.geometry.positions, cube.geometry.positions)
    np.testing.assert_array_equal(loaded.geometry.frequencies, cube.geometry.frequencies)
    assert loaded.provenance["noise_seed"] == 5


def test_image_csv_round_trip(tmp_path):
    spec = GridSpec(center=(0.5, -1.0), extent=(2, 4), resolution=(3, 5))
    rng = np.random.default_rng(0)
    img = ImageGrid(spec=spec, values=rng.standard_normal(15), metadata={"functional": "inv_f"})
    path = tmp_path / "image.csv"
    write_image_csv(img, path, metadata={"epsilon": 1e-8})
    again = read_image_csv(path)
    np.testing.assert_array_equal(again.values, img.values)
    assert again.spec == spec
    meta = json.loads((tmp_path / "image.meta.json").read_text())
    assert meta["functional"] == "inv_f"
    assert meta["grid"]["ordering"] == "row-major, x fastest"
    assert "code_version" in meta


def test_complex_image_csv(tmp_path):
    spec = GridSpec(center=(0, 0), extent=(1, 1), resolution=(2, 2))
    img = ImageGrid(spec=spec, values=np.array([1 + 2j, 3 - 4j, 0j, 1j]))
    path = tmp_path / "c.csv"
    write_image_csv(img, path)
    header = path.read_text().splitlines()[0]
    assert header == "x,y,value_re,value_im"
    again = read_image_csv(path)
    np.testing.assert_array_equal(again.values, img.values)


def test_rows_csv_deterministic_bytes(tmp_path):
    rows = [(0.1, 1 / 3), (2.0, 5e-17)]
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_rows_csv(p1, ["x", "y"], rows, metadata={"k": 1})
    write_rows_csv(p2, ["x", "y"], rows, metadata={"k": 1})
    assert p1.read_bytes() == p2.read_bytes()
    # shortest round-trip float formatting
    assert "0.3333333333333333" in p1.read_text()
