"""Imaging functionals: subspace F and R, classical SAR and CINT.

F(y) = (1/N) sum_n a_n^*(y) U_n S_n^+ U_n^* a_n(y) is real and its
reciprocal peaks at a target location with height |rho|;
R(y) = (1/N) sum_n b_n^*(y) V_n S_n^+ U_n^* a_n(y) is complex and its
reciprocal at the target location equals the complex reflectivity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, SingularGeometryError
from .forward import DataCube
from .geometry import AcquisitionGeometry, GridSpec, grid_points
from .subspace import BlockSVD, RegularizedSpectrum


@dataclass(frozen=True)
class ImageGrid:
    """Per-point image values over a rectangular grid.

    ``values`` is flat in the row-major, x-fastest order of grid_points;
    real for the 1/F, |SAR| and CINT images, complex for 1/R and coherent
    SAR.
    """

    spec: GridSpec
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def as_array(self):
        """Values reshaped to (ny, nx)."""
        nx, ny = self.spec.resolution
        return self.values.reshape(ny, nx)

    def points(self):
        return grid_points(self.spec)


def _distances(y, geom):
    y = np.asarray(y, dtype=float)
    if y.size == 2:
        y = np.append(y, 0.0)
    r = np.linalg.norm(geom.positions - y[None, :], axis=1)
    if np.any(r == 0):
        raise SingularGeometryError("search point coincides with a platform position")
    return r


def illumination_a(y, geom: AcquisitionGeometry) -> np.ndarray:
    """(N, M) illumination blocks a_n(y)[m] = exp(2i*w_m*r_n/c)/(4*pi*r_n).

    Only the first M of the 2M-1 frequencies enter.
    """
    r = _distances(y, geom)
    w = geom.imaging_frequencies
    return np.exp(2j * np.outer(r, w) / geom.wave_speed_c) / (4 * np.pi * r[:, None])


def illumination_b(y, geom: AcquisitionGeometry) -> np.ndarray:
    """(N, M) complementary blocks b_n(y)[k] = exp(-2i*(k-1)*dw*r_n/c)/(4*pi*r_n)."""
    r = _distances(y, geom)
    k = np.arange(geom.num_freq_M)
    return np.exp(
        -2j * geom.delta_omega * np.outer(r, k) / geom.wave_speed_c
    ) / (4 * np.pi * r[:, None])


def _check_shapes(svd, spectrum, geom):
    expected = (geom.num_positions_N, geom.num_freq_M)
    if svd.singular_values.shape != expected or spectrum.inverse.shape != expected:
        raise ValueError(
            "subspace factors do not match the geometry "
            f"(expected {expected}, got {svd.singular_values.shape} "
            f"and {spectrum.inverse.shape})"
        )


def f_epsilon(y, svd: BlockSVD, spectrum: RegularizedSpectrum, geom) -> float:
    """The real quadratic form F(y); raises if it drifts off the real axis."""
    _check_shapes(svd, spectrum, geom)
    a = illumination_a(y, geom)
    c = np.einsum("nkm,nk->nm", svd.u.conj(), a)  # U_n^* a_n
    total = np.einsum("nm,nm,nm->", c.conj(), spectrum.inverse.astype(complex), c)
    value = total / geom.num_positions_N
    if abs(value.imag) > 1e-8 * max(abs(value.real), 1e-300):
        raise NumericalError(
            f"F(y) imaginary part {value.imag:g} exceeds guard at y={y}"
        )
    return float(value.real)


def r_epsilon(y, svd: BlockSVD, spectrum: RegularizedSpectrum, geom) -> complex:
    """The complex functional R(y)."""
    _check_shapes(svd, spectrum, geom)
    a = illumination_a(y, geom)
    b = illumination_b(y, geom)
    c = np.einsum("nkm,nk->nm", svd.u.conj(), a)  # U_n^* a_n
    d = np.einsum("nmk,nk->nm", svd.vh, b)  # V_n^* b_n
    total = np.einsum("nm,nm,nm->", d.conj(), spectrum.inverse.astype(complex), c)
    return complex(total / geom.num_positions_N)


def _grid_distances(points, geom):
    r = np.linalg.norm(
        geom.positions[:, None, :] - points[None, :, :], axis=2
    )  # (N, G)
    if np.any(r == 0):
        raise SingularGeometryError("a grid point coincides with a platform position")
    return r


def f_epsilon_grid(points, svd, spectrum, geom) -> np.ndarray:
    """Vectorized F over (G, 3) points, block by block to bound memory."""
    r = _grid_distances(points, geom)
    w = geom.imaging_frequencies
    c_over = geom.wave_speed_c
    out = np.zeros(points.shape[0])
    for n in range(geom.num_positions_N):
        a = np.exp(2j * np.outer(w, r[n]) / c_over) / (4 * np.pi * r[n][None, :])
        coeff = svd.u[n].conj().T @ a  # (M, G)
        out += spectrum.inverse[n] @ (coeff.real**2 + coeff.imag**2)
    return out / geom.num_positions_N


def r_epsilon_grid(points, svd, spectrum, geom) -> np.ndarray:
    """Vectorized R over (G, 3) points."""
    r = _grid_distances(points, geom)
    w = geom.imaging_frequencies
    k = np.arange(geom.num_freq_M)
    c_over = geom.wave_speed_c
    out = np.zeros(points.shape[0], dtype=complex)
    for n in range(geom.num_positions_N):
        amp = 1 / (4 * np.pi * r[n][None, :])
        a = np.exp(2j * np.outer(w, r[n]) / c_over) * amp
        b = np.exp(-2j * geom.delta_omega * np.outer(k, r[n]) / c_over) * amp
        coeff = svd.u[n].conj().T @ a
        dcoeff = svd.vh[n] @ b
        out += np.sum(dcoeff.conj() * spectrum.inverse[n][:, None] * coeff, axis=0)
    return out / geom.num_positions_N


def classical_sar_image(cube: DataCube, geom, grid: GridSpec, magnitude=True) -> ImageGrid:
    """Backprojection image over the grid, all 2M-1 frequencies.

    I(y) = (1/(N*(2M-1))) * sum_{n,m} d_n(w_m) * exp(-2i*w_m*|x_n - y|/c).
    Returns |I| when ``magnitude`` (the display image) and the coherent
    complex I otherwise (used by the stability statistic).
    """
    pts = grid_points(grid)
    r = _grid_distances(pts, geom)
    w = geom.frequencies
    acc = np.zeros(pts.shape[0], dtype=complex)
    for n in range(geom.num_positions_N):
        phases = np.exp(-2j * np.outer(w, r[n]) / geom.wave_speed_c)
        acc += cube.values[:, n] @ phases
    acc /= geom.num_positions_N * len(w)
    values = np.abs(acc) if magnitude else acc
    tag = "sar_magnitude" if magnitude else "sar"
    return ImageGrid(spec=grid, values=values, metadata={"functional": tag})


def cint_image(cube: DataCube, geom, grid: GridSpec, x_d, omega_d, chunk=2048) -> ImageGrid:
    """Pair-correlation image with hard decoherence windows.

    Sums d_n(w_m) * conj(d_n'(w_m')) * exp(-2i*[w_m*r_n(y) - w_m'*r_n'(y)]/c)
    over position pairs with |x_n - x_n'| <= X_d and frequency pairs with
    |w_m - w_m'| <= 2*pi*Omega_d, and keeps the real part.  Raw values are
    returned; clipping negatives is left to display code.
    """
    if x_d is None or omega_d is None or not (x_d > 0 and omega_d > 0):
        raise ValueError("x_d and omega_d must be positive")
    pts = grid_points(grid)
    w = geom.frequencies
    tol = 1 + 1e-12  # keep boundary pairs despite rounding
    freq_mask = (
        np.abs(w[:, None] - w[None, :]) <= 2 * np.pi * omega_d * tol
    ).astype(float)
    xs = geom.positions[:, 0]
    pos_mask = (np.abs(xs[:, None] - xs[None, :]) <= x_d * tol).astype(float)
    values = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], chunk):
        sl = slice(start, min(start + chunk, pts.shape[0]))
        r = _grid_distances(pts[sl], geom)  # (N, g)
        q = cube.values.T[:, :, None] * np.exp(
            -2j * w[None, :, None] * r[:, None, :] / geom.wave_speed_c
        )  # (N, 2M-1, g)
        qk = np.einsum("nmg,mk->nkg", q, freq_mask)
        values[sl] = np.einsum(
            "nkg,pkg,np->g", qk, q.conj(), pos_mask
        ).real
    return ImageGrid(
        spec=grid,
        values=values,
        metadata={"functional": "cint", "x_d": float(x_d), "omega_d": float(omega_d)},
    )


def evaluate_grid(functional, grid: GridSpec, *, geom, svd=None, spectrum=None,
                  cube=None, x_d=None, omega_d=None) -> ImageGrid:
    """Map the chosen pointwise functional over all grid points.

    Tags: "inv_f" (real 1/F image), "inv_r" (complex 1/R), "sar"
    (coherent complex), "sar_magnitude", "cint".  Ordering is the
    row-major x-fastest order of grid_points, deterministically.
    """
    pts = grid_points(grid)
    if functional == "inv_f":
        f = f_epsilon_grid(pts, svd, spectrum, geom)
        with np.errstate(divide="ignore"):
            values = np.where(f > 0, 1.0 / np.where(f > 0, f, 1.0), np.inf)
        meta = {"functional": "inv_f", "epsilon": spectrum.epsilon}
    elif functional == "inv_r":
        rvals = r_epsilon_grid(pts, svd, spectrum, geom)
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.where(rvals != 0, 1.0 / np.where(rvals != 0, rvals, 1.0), np.inf)
        meta = {"functional": "inv_r", "epsilon": spectrum.epsilon}
    elif functional in ("sar", "sar_magnitude"):
        return classical_sar_image(cube, geom, grid, magnitude=functional == "sar_magnitude")
    elif functional == "cint":
        return cint_image(cube, geom, grid, x_d, omega_d)
    else:
        raise ValueError(f"unknown functional tag: {functional}")
    return ImageGrid(spec=grid, values=values, metadata=meta)
