import numpy as np
import pytest

from pronysar import (
    DomainError,
    GridSpec,
    ImageGrid,
    WindowTooSmallError,
    find_peak,
    image_snr,
    loglog_fit,
    measure_half_width,
    reflectivity_error,
)
from pronysar.analysis import half_width_along_axis, local_maxima_indices


def test_half_width_triangle():
    x = np.linspace(0, 3, 301)
    v = np.maximum(2.0 - x, 0.0)
    assert measure_half_width(x, v, peak_value=2.0) == pytest.approx(1.0, rel=1e-4)


def test_half_width_gaussian():
    sigma = 0.7
    x = np.linspace(-1, 4, 801)
    v = np.exp(-(x**2) / (2 * sigma**2))
    expected = sigma * np.sqrt(2 * np.log(2))
    assert measure_half_width(x, v, peak_value=1.0) == pytest.approx(expected, rel=1e-3)


def test_half_width_refined_callable():
    sigma = 0.7
    x = np.linspace(0, 4, 17)  # coarse samples, exact refinement
    v = np.exp(-(x**2) / (2 * sigma**2))
    got = measure_half_width(
        x, v, peak_value=1.0, refine=lambda t: np.exp(-(t**2) / (2 * sigma**2))
    )
    assert got == pytest.approx(sigma * np.sqrt(2 * np.log(2)), rel=1e-4)


def test_half_width_rescale_invariant():
    x = np.linspace(0, 3, 301)
    v = np.exp(-(x**2))
    d1 = measure_half_width(x, v, peak_value=1.0)
    d2 = measure_half_width(x, 17.3 * v, peak_value=17.3)
    assert d1 == d2


def test_half_width_window_too_small():
    x = np.linspace(0, 0.1, 11)
    v = np.exp(-(x**2))
    with pytest.raises(WindowTooSmallError):
        measure_half_width(x, v, peak_value=1.0)


def test_half_width_along_axis():
    def bump(p):
        return 1.0 / (1.0 + (p[0] - 2.0) ** 2)

    got = half_width_along_axis(bump, origin=(2.0, 0.0, 0.0), direction=(1, 0, 0), window=5.0)
    assert got == pytest.approx(1.0, rel=1e-4)


def test_loglog_identity_and_sqrt():
    xs = np.array([1.0, 2.0, 4.0, 8.0])
    intercept, slope = loglog_fit(xs, xs)
    assert intercept == pytest.approx(0.0, abs=1e-12)
    assert slope == pytest.approx(1.0, rel=1e-12)
    _, slope = loglog_fit(xs, np.sqrt(xs))
    assert slope == pytest.approx(0.5, rel=1e-12)


def test_loglog_scale_invariant_slope():
    xs = np.array([1.0, 3.0, 9.0, 27.0])
    ys = xs**1.7
    _, s1 = loglog_fit(xs, ys)
    _, s2 = loglog_fit(xs, 42.0 * ys)
    assert s1 == pytest.approx(s2, rel=1e-12)


def test_loglog_rejects_bad_input():
    with pytest.raises(DomainError):
        loglog_fit([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(DomainError):
        loglog_fit([1.0, -2.0, 3.0], [1.0, 2.0, 3.0])


def test_reflectivity_error_values():
    assert reflectivity_error(3.4j, 3.4j) == 0.0
    assert reflectivity_error(0.0, 3.4j) == 1.0
    # recovered value quoted to five figures gives E_rel near 0.00215
    assert reflectivity_error(-1.3059e-3 + 3.3928j, 3.4j) == pytest.approx(0.00215, rel=0.01)
    with pytest.raises(DomainError):
        reflectivity_error(1.0, 0.0)


def test_image_snr_two_sample():
    report = image_snr(np.array([[1.0], [3.0]]), functional="inv_f")
    assert report.image_snr == pytest.approx(2 / np.sqrt(2), rel=1e-12)
    assert report.num_realizations == 2


def test_image_snr_identical_realizations():
    report = image_snr(np.array([[2.0, 2.0], [2.0, 2.0]]))
    assert np.isinf(report.image_snr)


def test_image_snr_scale_invariant():
    rng = np.random.default_rng(5)
    vals = 1.0 + 0.1 * rng.standard_normal((20, 9))
    a = image_snr(vals).image_snr
    b = image_snr(123.4 * vals).image_snr
    assert a == pytest.approx(b, rel=1e-12)


def test_image_snr_complex_coherent_vs_incoherent():
    rng = np.random.default_rng(6)
    phases = np.exp(2j * np.pi * rng.uniform(size=(200, 4)))
    noisy = image_snr(phases).image_snr  # zero-mean phasors: tiny SNR
    stable = image_snr(np.abs(phases) + 0.01 * rng.standard_normal((200, 4))).image_snr
    assert noisy < 0.3
    assert stable > 30
    with pytest.raises(DomainError):
        image_snr(phases[:1])


def test_find_peak_single_and_ties():
    spec = GridSpec(center=(0, 0), extent=(2, 2), resolution=(3, 3))
    single = ImageGrid(spec=GridSpec(center=(1, 2), extent=(1, 1), resolution=(1, 1)),
                       values=np.array([4.2]))
    assert find_peak(single) == ((1.0, 2.0), 4.2)
    flat = ImageGrid(spec=spec, values=np.ones(9))
    loc, _ = find_peak(flat)
    assert loc == (-1.0, -1.0)  # first row-major point
    bump = np.zeros(9)
    bump[5] = 2.0
    loc, val = find_peak(ImageGrid(spec=spec, values=bump))
    assert loc == (1.0, 0.0) and val == 2.0


def test_local_maxima():
    spec = GridSpec(center=(0, 0), extent=(4, 4), resolution=(5, 5))
    arr = np.zeros((5, 5))
    arr[1, 3] = 1.0  # row iy = 1, column ix = 3
    arr[3, 0] = 2.0
    img = ImageGrid(spec=spec, values=arr.ravel())
    assert set(local_maxima_indices(img)) == {(3, 1), (0, 3)}
