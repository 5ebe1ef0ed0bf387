"""Experiment configuration: dataclass, INI-style file parsing, hashing."""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .forward import PointTarget
from .geometry import AcquisitionConfig, GridSpec


@dataclass
class ExperimentConfig:
    """Everything one experiment run needs, resolvable to a stable hash."""

    name: str
    kind: str
    acquisition: AcquisitionConfig
    grid: GridSpec = None
    targets: tuple = ()
    snr_db: float = float("inf")
    master_seed: int = 1
    perturbation: str = "none"  # none | direct | random_medium
    direct_sigma: float = 0.0  # seconds, shared by every position
    medium_ell: float = None
    medium_sigma_tilde: float = None
    epsilon: tuple = (1e-8,)
    tau_gap: float = 0.01
    rank_override: int = None
    x_d: float = None  # CINT windows; default aperture/6 and B/2
    omega_d: float = None
    sweep_name: str = None
    sweep_values: tuple = ()
    snr_list: tuple = ()
    sigma_tilde_list: tuple = ()
    realizations: int = 1
    out_dir: str = "out"
    notes: dict = field(default_factory=dict)

    def validate(self):
        if self.realizations < 1:
            raise ConfigError("realizations must be at least 1")
        if self.perturbation not in ("none", "direct", "random_medium"):
            raise ConfigError(f"perturbation model unknown: {self.perturbation}")
        if self.perturbation == "random_medium":
            if not self.medium_ell:
                raise ConfigError("random_medium needs medium_ell")
            if self.medium_sigma_tilde is None and not self.sigma_tilde_list:
                raise ConfigError(
                    "random_medium needs medium_sigma_tilde or sigma_tilde_list"
                )
        if self.sweep_name is not None and not self.sweep_values:
            raise ConfigError(f"sweep_name {self.sweep_name} has no sweep_values")
        if any(e <= 0 for e in self.epsilon):
            raise ConfigError("epsilon values must be positive")
        return self

    def to_canonical(self) -> str:
        def enc(obj):
            if isinstance(obj, (np.floating, float)):
                return repr(float(obj))
            if dataclasses.is_dataclass(obj):
                return {k: enc(v) for k, v in dataclasses.asdict(obj).items()}
            if isinstance(obj, (list, tuple)):
                return [enc(v) for v in obj]
            if isinstance(obj, dict):
                return {k: enc(v) for k, v in obj.items()}
            if isinstance(obj, complex):
                return [repr(obj.real), repr(obj.imag)]
            return obj

        payload = {
            k: enc(v)
            for k, v in dataclasses.asdict(self).items()
            if k != "out_dir"
        }
        return json.dumps(payload, sort_keys=True)

    def config_hash(self) -> str:
        return hashlib.sha256(self.to_canonical().encode()).hexdigest()[:16]


_GEOMETRY_KEYS = {
    "wave_speed_c": float,
    "center_frequency_f0": float,
    "bandwidth_B": float,
    "num_freq_M": int,
    "num_positions_N": int,
    "aperture_a": float,
    "range_offset_R": float,
    "height_H": float,
}


def _floats(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


def _parse_targets(text):
    targets = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        vals = _floats(chunk)
        if len(vals) != 4:
            raise ConfigError(
                "scene.targets entries must be 'x y rho_re rho_im', got " + chunk
            )
        targets.append(PointTarget((vals[0], vals[1], 0.0), complex(vals[2], vals[3])))
    return tuple(targets)


def apply_config_file(config: ExperimentConfig, path) -> ExperimentConfig:
    """Overlay key=value sections from an INI-style file onto a config."""
    parser = configparser.ConfigParser()
    parser.optionxform = str  # keep key case (num_positions_N)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file: {path}")
    cfg = dataclasses.replace(config)
    for section in parser.sections():
        items = dict(parser.items(section))
        try:
            if section == "geometry":
                fields = dataclasses.asdict(cfg.acquisition)
                for key, val in items.items():
                    if key not in _GEOMETRY_KEYS:
                        raise ConfigError(f"unknown geometry key: {key}")
                    fields[key] = _GEOMETRY_KEYS[key](val)
                cfg.acquisition = AcquisitionConfig(**fields)
            elif section == "grid":
                center = cfg.grid.center if cfg.grid else (0.0, 0.0)
                extent = cfg.grid.extent if cfg.grid else (1.0, 1.0)
                res = cfg.grid.resolution if cfg.grid else (51, 51)
                for key, val in items.items():
                    if key == "center":
                        center = _floats(val)
                    elif key == "extent":
                        extent = _floats(val)
                    elif key == "resolution":
                        res = tuple(int(v) for v in _floats(val))
                    else:
                        raise ConfigError(f"unknown grid key: {key}")
                cfg.grid = GridSpec(center=center, extent=extent, resolution=res)
            elif section == "scene":
                for key, val in items.items():
                    if key != "targets":
                        raise ConfigError(f"unknown scene key: {key}")
                    cfg.targets = _parse_targets(val)
            elif section == "noise":
                for key, val in items.items():
                    if key != "snr_db":
                        raise ConfigError(f"unknown noise key: {key}")
                    cfg.snr_db = float("inf") if val.strip() in ("inf", "none") else float(val)
            elif section == "perturbation":
                for key, val in items.items():
                    if key == "model":
                        cfg.perturbation = val.strip()
                    elif key == "direct_sigma":
                        cfg.direct_sigma = float(val)
                    elif key == "ell":
                        cfg.medium_ell = float(val)
                    elif key == "sigma_tilde":
                        cfg.medium_sigma_tilde = float(val)
                    else:
                        raise ConfigError(f"unknown perturbation key: {key}")
            elif section == "functional":
                for key, val in items.items():
                    if key == "epsilon":
                        cfg.epsilon = _floats(val)
                    elif key == "tau_gap":
                        cfg.tau_gap = float(val)
                    elif key == "rank_override":
                        cfg.rank_override = int(val)
                    elif key == "x_d":
                        cfg.x_d = float(val)
                    elif key == "omega_d":
                        cfg.omega_d = float(val)
                    else:
                        raise ConfigError(f"unknown functional key: {key}")
            elif section == "sweep":
                for key, val in items.items():
                    if key == "name":
                        cfg.sweep_name = val.strip()
                    elif key == "values":
                        cfg.sweep_values = _floats(val)
                    else:
                        raise ConfigError(f"unknown sweep key: {key}")
            elif section == "run":
                for key, val in items.items():
                    if key == "master_seed":
                        cfg.master_seed = int(val)
                    elif key == "realizations":
                        cfg.realizations = int(val)
                    elif key == "out_dir":
                        cfg.out_dir = val.strip()
                    elif key == "kind":
                        cfg.kind = val.strip()
                    else:
                        raise ConfigError(f"unknown run key: {key}")
            else:
                raise ConfigError(f"unknown config section: {section}")
        except ValueError as exc:
            raise ConfigError(f"bad value in [{section}]: {exc}") from exc
    return cfg
