import numpy as np
import pytest

from pronysar import AcquisitionConfig, PointTarget, build_geometry

# Desk-scale defaults drawn from the GOTCHA-style parameter set used across
# the experiment presets.
GOTCHA = AcquisitionConfig(
    wave_speed_c=3e8,
    center_frequency_f0=9.6e9,
    bandwidth_B=622e6,
    num_freq_M=20,
    num_positions_N=32,
    aperture_a=130.0,
    range_offset_R=3550.0,
    height_H=7300.0,
)


@pytest.fixture(scope="session")
def gotcha_geom():
    return build_geometry(GOTCHA)


@pytest.fixture(scope="session")
def single_target():
    return PointTarget((1.0, 1.0, 0.0), 3.4j)


@pytest.fixture(scope="session")
def three_targets():
    return [
        PointTarget((0.01, 0.1, 0.0), 3.4j),
        PointTarget((-0.30, -0.50, 0.0), 4.2j),
        PointTarget((-0.50, 0.50, 0.0), 3.1j),
    ]


def rng(seed):
    return np.random.default_rng(seed)
