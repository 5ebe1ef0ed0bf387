"""Frequency-domain data synthesis for point-target scenes.

Measurements follow the single-scattering model

    d_n(w_m) = sum_p rho_p * exp(i*w_m*(2*|x_n - y_p|/c + 2*nu_pn))
               / (4*pi*|x_n - y_p|)^2

where nu_pn is an optional one-way travel-time perturbation; the factor 2
on nu reflects round-trip propagation (each one-way Green's function picks
up exp(i*w*nu)).  Also houses additive noise, direct per-position travel
time perturbations and the random-medium travel time model.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.fft
from scipy.interpolate import RegularGridInterpolator

from .errors import ConfigError, DomainError, SingularGeometryError
from .geometry import AcquisitionGeometry


@dataclass(frozen=True)
class PointTarget:
    """A point scatterer: 3-vector position (m) and complex reflectivity."""

    position: tuple
    reflectivity: complex

    def __post_init__(self):
        if not abs(self.reflectivity) > 0:
            raise ConfigError("reflectivity must have positive magnitude")


def scene_hash(targets) -> str:
    payload = json.dumps(
        [
            [list(map(float, t.position)), [t.reflectivity.real, t.reflectivity.imag]]
            for t in targets
        ]
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class TravelTimePerturbation:
    """Per-(target, position) one-way travel-time offsets nu in seconds.

    ``offsets`` is () for model "none", (N,) for "direct" (shared by every
    target at position n) and (P, N) for "random_medium".
    """

    model: str
    offsets: np.ndarray

    @classmethod
    def none(cls):
        return cls(model="none", offsets=np.zeros(()))

    def matrix(self, num_targets, num_positions):
        """Offsets broadcast to shape (P, N)."""
        nu = np.asarray(self.offsets, dtype=float)
        if self.model == "none" or nu.ndim == 0:
            return np.zeros((num_targets, num_positions))
        if nu.ndim == 1:
            if nu.size != num_positions:
                raise ConfigError("perturbation offsets do not match position count")
            return np.broadcast_to(nu, (num_targets, num_positions))
        if nu.shape != (num_targets, num_positions):
            raise ConfigError("perturbation offsets do not match scene shape")
        return nu


@dataclass(frozen=True)
class DataCube:
    """Complex measurement matrix, rows = 2M-1 frequencies, columns = N positions."""

    values: np.ndarray
    geometry: AcquisitionGeometry
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        M = self.geometry.num_freq_M
        N = self.geometry.num_positions_N
        if self.values.shape != (2 * M - 1, N):
            raise ConfigError(
                f"cube shape {self.values.shape} does not match geometry "
                f"({2 * M - 1}, {N})"
            )


def simulate_born(scene, geom: AcquisitionGeometry, perturbation=None) -> DataCube:
    """Synthesize the noiseless measurement cube for a list of point targets.

    An empty scene yields the all-zero cube.  Born superposition holds
    exactly: the cube of a union of scenes is the sum of the cubes.
    """
    if perturbation is None:
        perturbation = TravelTimePerturbation.none()
    M = geom.num_freq_M
    N = geom.num_positions_N
    values = np.zeros((2 * M - 1, N), dtype=complex)
    if scene:
        pos = np.array([t.position for t in scene], dtype=float)
        rho = np.array([t.reflectivity for t in scene], dtype=complex)
        dist = np.linalg.norm(pos[:, None, :] - geom.positions[None, :, :], axis=2)
        if np.any(dist == 0):
            raise SingularGeometryError(
                "target coincides with a platform position"
            )
        nu = perturbation.matrix(len(scene), N)
        tau = 2 * dist / geom.wave_speed_c + 2 * nu  # (P, N) round trip
        amp = rho[:, None] / (4 * np.pi * dist) ** 2
        # Phases reach 1e6 rad at radar scales.  Build them as an exact
        # arithmetic progression in m, reduced mod 2*pi in extended
        # precision, so the per-column geometric structure survives
        # rounding (entry-by-entry w_m * tau would leave rank-1 residuals
        # near 1e-10).
        two_pi = 2 * np.arccos(np.longdouble(-1.0))
        cfg = geom.config
        w1 = two_pi * (
            np.longdouble(cfg.center_frequency_f0) - np.longdouble(cfg.bandwidth_B) / 2
        )
        dw = two_pi * np.longdouble(cfg.bandwidth_B) / np.longdouble(cfg.num_freq_M - 1)
        tau_ld = tau.astype(np.longdouble)
        base = np.mod(w1 * tau_ld, two_pi)
        step = np.mod(dw * tau_ld, two_pi)
        m_idx = np.arange(2 * M - 1, dtype=np.longdouble)[:, None, None]
        phase = np.mod(base[None, :, :] + m_idx * step[None, :, :], two_pi).astype(float)
        values = np.einsum("pn,mpn->mn", amp, np.exp(1j * phase))
    provenance = {
        "scene_hash": scene_hash(scene),
        "perturbation_model": perturbation.model,
        "snr_db": None,
        "noise_seed": None,
    }
    return DataCube(values=values, geometry=geom, provenance=provenance)


def add_noise(cube: DataCube, snr_db, seed) -> DataCube:
    """Add circularly-symmetric complex Gaussian noise at an exact realized SNR.

    The noise draw is rescaled so that
    10*log10(||signal||_F^2 / ||noise||_F^2) equals ``snr_db`` exactly.
    ``snr_db = inf`` is the no-noise sentinel.  Deterministic given seed.
    """
    if np.isinf(snr_db):
        return DataCube(
            values=cube.values.copy(),
            geometry=cube.geometry,
            provenance={**cube.provenance, "snr_db": float("inf"), "noise_seed": None},
        )
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    shape = cube.values.shape
    w = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    signal_norm = np.linalg.norm(cube.values)
    w_norm = np.linalg.norm(w)
    scale = 0.0 if w_norm == 0 else signal_norm * 10 ** (-snr_db / 20) / w_norm
    return DataCube(
        values=cube.values + scale * w,
        geometry=cube.geometry,
        provenance={**cube.provenance, "snr_db": float(snr_db), "noise_seed": int(seed)},
    )


def sample_direct_perturbations(sigmas, seed) -> TravelTimePerturbation:
    """Independent zero-mean Gaussian offsets nu_n, one per platform position.

    The same offset applies to every target at position n.
    """
    sig = np.asarray(sigmas, dtype=float)
    if np.any(sig < 0):
        raise ConfigError("direct perturbation sigmas must be nonnegative")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    nu = sig * rng.standard_normal(sig.shape)
    return TravelTimePerturbation(model="direct", offsets=nu)


# ---------------------------------------------------------------------------
# Random-medium travel-time model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RandomMediumSpec:
    """Weakly fluctuating medium: 1/c^2(x) = (1/c0^2) * (1 + sigma*mu(x/ell)).

    ``mu`` is a stationary Gaussian field with R(0) = 1 and Gaussian
    autocorrelation exp(-r^2/(2*ell^2)).
    """

    correlation_length_ell: float
    fluctuation_strength_sigma: float
    background_speed_c0: float
    autocorrelation: str = "gaussian"
    field_grid_resolution: float = None
    integral_step: float = None

    def __post_init__(self):
        if not self.correlation_length_ell > 0:
            raise ConfigError("correlation_length_ell must be positive")
        if self.fluctuation_strength_sigma < 0:
            raise ConfigError("fluctuation_strength_sigma must be nonnegative")
        if not self.background_speed_c0 > 0:
            raise ConfigError("background_speed_c0 must be positive")
        if self.autocorrelation != "gaussian":
            raise ConfigError("autocorrelation must be 'gaussian'")
        ell = self.correlation_length_ell
        if self.field_grid_resolution is None:
            object.__setattr__(self, "field_grid_resolution", ell / 5)
        if self.integral_step is None:
            object.__setattr__(self, "integral_step", ell / 10)
        if not 0 < self.integral_step <= ell / 10:
            raise ConfigError("integral_step must be in (0, ell/10]")
        if not self.field_grid_resolution > 0:
            raise ConfigError("field_grid_resolution must be positive")


@dataclass(frozen=True)
class BoundingBox:
    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def around(cls, points, margin=0.0):
        """Axis-aligned box around ``points``; scalar or per-axis margin."""
        pts = np.asarray(points, dtype=float)
        m = np.broadcast_to(np.asarray(margin, dtype=float), (3,))
        return cls(lo=pts.min(axis=0) - m, hi=pts.max(axis=0) + m)


class RandomField:
    """A realization of the unit-variance fluctuation field mu.

    Sampled on a regular grid with linear interpolation in between.  Axes
    whose domain extent is zero are collapsed: the field is synthesized in
    the remaining dimensions, which is exact for a stationary field with an
    isotropic Gaussian kernel restricted to an axis-aligned plane or line.
    """

    def __init__(self, axes, values, frozen_coords):
        self.axes = axes  # one node array per active axis
        self.values = values
        self.frozen_coords = frozen_coords  # dict axis index -> coordinate
        self._interp = RegularGridInterpolator(
            axes, values, method="linear", bounds_error=True
        )
        self.active = [i for i in range(3) if i not in frozen_coords]

    def sample(self, points):
        """Field values at (K, 3) physical points; DomainError outside."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        for ax, coord in self.frozen_coords.items():
            off = np.max(np.abs(pts[:, ax] - coord)) if pts.size else 0.0
            if off > 1e-9 * max(1.0, abs(coord)):
                raise DomainError(
                    f"point leaves the collapsed field plane on axis {ax}"
                )
        try:
            return self._interp(pts[:, self.active])
        except ValueError as exc:
            raise DomainError(f"point outside the sampled field domain: {exc}") from exc


def sample_random_medium(spec: RandomMediumSpec, domain: BoundingBox, seed) -> RandomField:
    """Draw one realization of mu over ``domain`` by spectral synthesis.

    Circulant embedding on a padded periodic grid gives the exact Gaussian
    autocorrelation up to wrap-around terms of order exp(-18); spacing is
    at most ell/5.  Deterministic given seed.
    """
    ell = spec.correlation_length_ell
    h = min(spec.field_grid_resolution, ell / 5)
    lo = np.asarray(domain.lo, dtype=float)
    hi = np.asarray(domain.hi, dtype=float)
    if np.any(hi < lo):
        raise ConfigError("domain upper corner below lower corner")
    extents = hi - lo
    active = [i for i in range(3) if extents[i] > 0]
    if not active:
        raise ConfigError("domain has zero extent along every axis")
    if max(extents[i] for i in active) < ell:
        raise ConfigError(
            "domain too small for one correlation length "
            f"(max extent {max(extents):g} < {ell:g})"
        )

    pad = 3 * ell  # wrap-around correlation exp(-(2*pad)^2/(2*ell^2)) = exp(-18)
    node_counts = []
    embed_counts = []
    for i in active:
        n = int(np.ceil(extents[i] / h)) + 1
        node_counts.append(n)
        embed_counts.append(scipy.fft.next_fast_len(n + int(np.ceil(2 * pad / h))))

    # squared minimum-image distance on the embedding torus
    sq = np.zeros(tuple(embed_counts))
    for dim, n_emb in enumerate(embed_counts):
        k = np.arange(n_emb)
        d = h * np.minimum(k, n_emb - k)
        shape = [1] * len(embed_counts)
        shape[dim] = n_emb
        sq = sq + (d**2).reshape(shape)
    cov = np.exp(-sq / (2 * ell**2))
    eig = scipy.fft.fftn(cov).real
    np.clip(eig, 0.0, None, out=eig)  # clip tiny negative embedding eigenvalues

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    xi = rng.standard_normal(cov.shape) + 1j * rng.standard_normal(cov.shape)
    total = cov.size
    z = scipy.fft.ifftn(np.sqrt(eig) * xi) * np.sqrt(total)
    crop = tuple(slice(0, n) for n in node_counts)
    values = np.ascontiguousarray(z.real[crop])

    axes = tuple(lo[i] + h * np.arange(n) for i, n in zip(active, node_counts))
    frozen = {i: float(lo[i]) for i in range(3) if i not in active}
    return RandomField(axes=axes, values=values, frozen_coords=frozen)


def travel_time_perturbation_from_medium(field: RandomField, spec: RandomMediumSpec, x, y):
    """One-way random travel time nu(x, y) in seconds.

    nu = (sigma*|x-y|/(2*c0)) * integral_0^1 mu(y + (x-y)*s) ds, evaluated
    by the composite trapezoid rule with step at most ``spec.integral_step``
    along the segment.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dist = float(np.linalg.norm(x - y))
    if dist == 0.0 or spec.fluctuation_strength_sigma == 0.0:
        return 0.0
    n_int = max(1, int(np.ceil(dist / spec.integral_step)))
    s = np.linspace(0.0, 1.0, n_int + 1)
    pts = y[None, :] + (x - y)[None, :] * s[:, None]
    mu = field.sample(pts)
    integral = np.trapezoid(mu, dx=1.0 / n_int)
    return spec.fluctuation_strength_sigma * dist / (2 * spec.background_speed_c0) * integral


def medium_perturbations(field, spec, geom, scene) -> TravelTimePerturbation:
    """Per-(target, position) offsets nu(x_n, y_p) for a whole scene."""
    nu = np.zeros((len(scene), geom.num_positions_N))
    for p, target in enumerate(scene):
        for n in range(geom.num_positions_N):
            nu[p, n] = travel_time_perturbation_from_medium(
                field, spec, geom.positions[n], target.position
            )
    return TravelTimePerturbation(model="random_medium", offsets=nu)


def dimensionless_scalings(geom: AcquisitionGeometry, spec: RandomMediumSpec):
    """(sigma0, sigma_tilde, regime_ok) for the random travel time model.

    sigma0 = lambda0/sqrt(ell*L) and sigma_tilde = sigma/sigma0.  The flag
    tests the validity condition sigma^2*L^3/ell^3 < lambda^2/(sigma^2*ell*L);
    it is advisory only and never blocks execution.
    """
    lam = geom.wavelength_lambda0
    ell = spec.correlation_length_ell
    L = geom.distance_L
    sigma = spec.fluctuation_strength_sigma
    sigma0 = lam / np.sqrt(ell * L)
    sigma_tilde = sigma / sigma0
    if sigma == 0:
        regime_ok = True
    else:
        regime_ok = bool(
            sigma**2 * L**3 / ell**3 < lam**2 / (sigma**2 * ell * L)
        )
    return sigma0, sigma_tilde, regime_ok
