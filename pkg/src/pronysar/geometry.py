"""Acquisition geometry: linear flight path, frequency grid, imaging grid.

Coordinates follow the range-along-y convention: the platform moves parallel
to the x axis at points (x_n, R, H), the imaging plane is z = 0, x is
cross-range and y is range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class AcquisitionConfig:
    """Scalar description of one acquisition run (SI units)."""

    wave_speed_c: float
    center_frequency_f0: float
    bandwidth_B: float
    num_freq_M: int
    num_positions_N: int
    aperture_a: float
    range_offset_R: float
    height_H: float


@dataclass(frozen=True)
class AcquisitionGeometry:
    """Flight-path sample positions, frequency grid and derived scalars.

    ``positions`` has shape (N, 3) with rows (x_n, R, H) for
    x_n = -a/2 + a*(n-1)/(N-1), n = 1..N.  ``frequencies`` holds the
    2M-1 equispaced angular frequencies; the first M of them span exactly
    the bandwidth B centered at f0, so the full grid spans 2B.
    """

    config: AcquisitionConfig
    positions: np.ndarray
    frequencies: np.ndarray
    distance_L: float
    sin_theta: float
    cos_theta: float
    delta_omega: float
    wavelength_lambda0: float
    wavenumber_k0: float

    @property
    def wave_speed_c(self):
        return self.config.wave_speed_c

    @property
    def num_freq_M(self):
        return self.config.num_freq_M

    @property
    def num_positions_N(self):
        return self.config.num_positions_N

    @property
    def bandwidth_B(self):
        return self.config.bandwidth_B

    @property
    def center_frequency_f0(self):
        return self.config.center_frequency_f0

    @property
    def aperture_a(self):
        return self.config.aperture_a

    @property
    def range_offset_R(self):
        return self.config.range_offset_R

    @property
    def height_H(self):
        return self.config.height_H

    @property
    def imaging_frequencies(self):
        """The first M angular frequencies, used by the illumination vectors."""
        return self.frequencies[: self.num_freq_M]


def build_geometry(config: AcquisitionConfig) -> AcquisitionGeometry:
    """Construct the acquisition geometry from its scalar configuration.

    Positions are x_n = (-a/2 + a*(n-1)/(N-1), R, H) for n = 1..N and the
    angular frequency grid is w_m = 2*pi*f0 - pi*B + (m-1)*dw with
    dw = 2*pi*B/(M-1), m = 1..2M-1.

    Raises
    ------
    ConfigError
        If a scalar field is out of range.  R and H may individually be
        zero (flat geometry has H = 0) but not both.
    """
    for name in ("wave_speed_c", "center_frequency_f0", "bandwidth_B", "aperture_a"):
        if not getattr(config, name) > 0:
            raise ConfigError(f"{name} must be positive")
    for name in ("range_offset_R", "height_H"):
        if getattr(config, name) < 0:
            raise ConfigError(f"{name} must be nonnegative")
    if config.num_freq_M < 2:
        raise ConfigError("num_freq_M must be at least 2")
    if config.num_positions_N < 2:
        raise ConfigError("num_positions_N must be at least 2")
    L = float(np.hypot(config.range_offset_R, config.height_H))
    if L == 0.0:
        raise ConfigError("range_offset_R and height_H cannot both be zero")

    n = np.arange(config.num_positions_N)
    x = -config.aperture_a / 2 + config.aperture_a * n / (config.num_positions_N - 1)
    positions = np.column_stack(
        [x, np.full_like(x, config.range_offset_R), np.full_like(x, config.height_H)]
    )

    m = np.arange(2 * config.num_freq_M - 1)
    delta_omega = 2 * np.pi * config.bandwidth_B / (config.num_freq_M - 1)
    frequencies = (
        2 * np.pi * config.center_frequency_f0
        - np.pi * config.bandwidth_B
        + m * delta_omega
    )

    lambda0 = config.wave_speed_c / config.center_frequency_f0
    return AcquisitionGeometry(
        config=config,
        positions=positions,
        frequencies=frequencies,
        distance_L=L,
        sin_theta=config.range_offset_R / L,
        cos_theta=config.height_H / L,
        delta_omega=delta_omega,
        wavelength_lambda0=lambda0,
        wavenumber_k0=2 * np.pi / lambda0,
    )


@dataclass(frozen=True)
class GridSpec:
    """Rectangular search grid on the z = 0 plane."""

    center: tuple
    extent: tuple
    resolution: tuple

    def __post_init__(self):
        nx, ny = self.resolution
        if nx < 1 or ny < 1:
            raise ConfigError("grid.resolution entries must be at least 1")
        wx, wy = self.extent
        if not (wx > 0 and wy > 0):
            raise ConfigError("grid.extent entries must be positive")

    def xs(self):
        cx, _ = self.center
        wx, _ = self.extent
        nx, _ = self.resolution
        if nx == 1:
            return np.array([cx])
        return np.linspace(cx - wx / 2, cx + wx / 2, nx)

    def ys(self):
        _, cy = self.center
        _, wy = self.extent
        _, ny = self.resolution
        if ny == 1:
            return np.array([cy])
        return np.linspace(cy - wy / 2, cy + wy / 2, ny)

    @property
    def num_points(self):
        return self.resolution[0] * self.resolution[1]

    def spacing(self):
        """(dx, dy) between neighboring nodes; 0 along a single-node axis."""
        wx, wy = self.extent
        nx, ny = self.resolution
        dx = wx / (nx - 1) if nx > 1 else 0.0
        dy = wy / (ny - 1) if ny > 1 else 0.0
        return dx, dy

    def nearest_node(self, x, y):
        """(ix, iy) indices of the grid node closest to (x, y)."""
        ix = int(np.argmin(np.abs(self.xs() - x)))
        iy = int(np.argmin(np.abs(self.ys() - y)))
        return ix, iy


def grid_points(spec: GridSpec) -> np.ndarray:
    """Row-major list of nx*ny grid points on z = 0, x varying fastest.

    Returns an (nx*ny, 3) array; corners sit at center +/- extent/2.
    """
    xs = spec.xs()
    ys = spec.ys()
    nx, ny = spec.resolution
    return np.column_stack(
        [np.tile(xs, ny), np.repeat(ys, nx), np.zeros(nx * ny)]
    )
