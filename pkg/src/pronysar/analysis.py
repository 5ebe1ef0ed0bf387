"""Measurement procedures: half-widths, log-log fits, recovery error,
peak finding and the Monte Carlo image-SNR stability statistic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, WindowTooSmallError
from .imaging import ImageGrid


@dataclass(frozen=True)
class ResolutionMeasurement:
    axis: str  # "cross_range" or "range"
    half_width: float
    peak_location: tuple
    peak_value: float


@dataclass(frozen=True)
class StabilityReport:
    functional: str
    num_realizations: int
    window: object
    image_snr: float
    peak_values: np.ndarray


def measure_half_width(offsets, values, peak_value, refine=None, rel_tol=1e-4):
    """Smallest d > 0 with profile(peak + d) = peak_value/2.

    The profile is sampled at ``offsets`` (ascending); the peak is the
    sample maximum and the search runs on its positive side.  The crossing
    is located by bisection between the bracketing samples, against the
    ``refine`` callable when given and the linear interpolant otherwise,
    to relative tolerance ``rel_tol``.
    """
    offsets = np.asarray(offsets, dtype=float)
    values = np.asarray(values, dtype=float)
    half = peak_value / 2
    peak_idx = int(np.argmax(values))
    bracket = None
    for i in range(peak_idx, len(values) - 1):
        if values[i] >= half > values[i + 1]:
            bracket = i
            break
    if bracket is None:
        raise WindowTooSmallError(
            "profile never crosses half peak on the positive side; widen the window"
        )
    lo, hi = offsets[bracket], offsets[bracket + 1]
    if refine is None:
        v_lo, v_hi = values[bracket], values[bracket + 1]

        def refine(x):
            t = (x - lo) / (hi - lo)
            return v_lo + t * (v_hi - v_lo)

    a, b = lo, hi
    scale = max(abs(offsets[peak_idx] - b), abs(b - a))
    while b - a > rel_tol * scale:
        mid = 0.5 * (a + b)
        if refine(mid) >= half:
            a = mid
        else:
            b = mid
    crossing = 0.5 * (a + b)
    return float(crossing - offsets[peak_idx])


def half_width_along_axis(evaluate, origin, direction, window, num_samples=65,
                          rel_tol=1e-4):
    """Half-width of ``evaluate`` along a ray from ``origin``.

    ``evaluate`` maps a 3-vector to a real image value; the profile is
    sampled at num_samples offsets in [0, window] and refined by bisection
    on the true function.
    """
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    offsets = np.linspace(0.0, window, num_samples)
    values = np.array([evaluate(origin + d * direction) for d in offsets])
    peak = values[0]

    def refine(d):
        return evaluate(origin + d * direction)

    return measure_half_width(offsets, values, peak, refine=refine, rel_tol=rel_tol)


def full_width_at_half_max(evaluate, origin, direction, window, num_samples=65,
                           rel_tol=1e-4):
    """Width between the two half-maximum crossings around ``origin``.

    The sum of the one-sided crossing distances on both sides of the peak.
    This is the resolution width the closed-form constants describe; the
    one-sided crossing of the symmetric profile sits at half of it.
    """
    left = half_width_along_axis(
        evaluate, origin, -np.asarray(direction, dtype=float), window,
        num_samples=num_samples, rel_tol=rel_tol,
    )
    right = half_width_along_axis(
        evaluate, origin, direction, window,
        num_samples=num_samples, rel_tol=rel_tol,
    )
    return left + right


def loglog_fit(xs, ys):
    """Ordinary least squares on (ln x, ln y); returns (intercept, slope)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.size < 3 or ys.size != xs.size:
        raise DomainError("loglog_fit needs at least 3 matching points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("loglog_fit requires strictly positive data")
    slope, intercept = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(intercept), float(slope)


def reflectivity_error(rho_hat, rho):
    """Relative recovery error |rho - rho_hat| / |rho|."""
    if rho == 0:
        raise DomainError("true reflectivity must be nonzero")
    return abs(rho - rho_hat) / abs(rho)


def image_snr(realizations, window=None, functional="") -> StabilityReport:
    """Across-realization image SNR over a window of grid points.

    ``realizations`` is (K, ...) with K >= 2 realizations of the window
    values (real or complex).  Pointwise the statistic is |mean|/std with
    the N-1 std divisor; the pointwise ratios are then averaged over the
    window.  Zero variance reports the +inf sentinel.
    """
    vals = np.asarray(realizations)
    if vals.shape[0] < 2:
        raise DomainError("image_snr needs at least 2 realizations")
    mean = vals.mean(axis=0)
    centered = vals - mean
    std = np.sqrt((np.abs(centered) ** 2).sum(axis=0) / (vals.shape[0] - 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        pointwise = np.where(std > 0, np.abs(mean) / np.where(std > 0, std, 1.0), np.inf)
    snr = float(np.mean(pointwise))
    peaks = np.max(np.abs(vals.reshape(vals.shape[0], -1)), axis=1)
    return StabilityReport(
        functional=functional,
        num_realizations=int(vals.shape[0]),
        window=window,
        image_snr=snr,
        peak_values=peaks,
    )


def find_peak(grid: ImageGrid):
    """((x, y), value) of the grid argmax; ties break at the lowest
    row-major index.  Complex grids rank by modulus."""
    vals = grid.values
    key = np.abs(vals) if np.iscomplexobj(vals) else vals
    idx = int(np.argmax(key))
    pt = grid.points()[idx]
    return (float(pt[0]), float(pt[1])), vals[idx]


def local_maxima_indices(image: ImageGrid):
    """Grid indices (ix, iy) of strict 8-neighbor local maxima.

    Exact plateaus yield no maxima; images of continuous functionals do not
    produce them.
    """
    arr = image.as_array()
    ny, nx = arr.shape
    padded = np.full((ny + 2, nx + 2), -np.inf)
    padded[1:-1, 1:-1] = arr
    is_max = np.ones((ny, nx), dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            is_max &= arr > padded[1 + dy : 1 + dy + ny, 1 + dx : 1 + dx + nx]
    iy, ix = np.nonzero(is_max)
    return list(zip(ix.tolist(), iy.tolist()))
