"""Configuration management for the IRS-THz simulator."""

import copy
import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from .errors import ConfigError
from .units import db_to_linear, dbm_to_watts, noise_power, wavelength

logger = logging.getLogger(__name__)

ALGORITHMS = ("gs", "es", "greedy", "random")


@dataclass
class RadioConfig:
    """Link-budget and array parameters."""
    carrier_freq_ghz: float = 300.0
    antennas: int = 64
    irs_side: int = 100  # N = irs_side ** 2 elements
    bandwidth_ghz: float = 10.0
    noise_density_dbm_hz: float = -174.0
    noise_figure_db: float = 10.0
    power_dbm: float = 23.0  # device transmit power and AP budget
    kappa_abs: float = 0.0033  # 1/m
    # G_AP, G_elem_in, G_elem_out, G_dev
    gains_dbi: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0, 0.0])
    element_spacing_wl: float = 0.5
    element_side_wl: float = 0.4
    antenna_spacing_wl: float = 0.5

    @property
    def carrier_freq_hz(self) -> float:
        return self.carrier_freq_ghz * 1e9

    @property
    def bandwidth_hz(self) -> float:
        return self.bandwidth_ghz * 1e9

    @property
    def wavelength(self) -> float:
        return wavelength(self.carrier_freq_hz)

    @property
    def elements(self) -> int:
        return self.irs_side * self.irs_side

    @property
    def power_w(self) -> float:
        return dbm_to_watts(self.power_dbm)

    @property
    def noise_power_w(self) -> float:
        return noise_power(self.noise_density_dbm_hz, self.bandwidth_hz, self.noise_figure_db)

    @property
    def gains_linear(self) -> Tuple[float, float, float, float]:
        return tuple(db_to_linear(g) for g in self.gains_dbi)


@dataclass
class CsiConfig:
    """Channel-estimation error variances, relative to estimated-channel power."""
    sigma2_g: float = 0.1  # device <-> IRS hop
    sigma2_G: float = 0.1  # IRS <-> AP hop


@dataclass
class GeometryConfig:
    """Floor plan. Coordinate ranges are fractions of the area so they scale with it."""
    area: List[float] = field(default_factory=lambda: [40.0, 40.0])
    uplink_devices: int = 10
    downlink_devices: int = 10
    uplink_irs: int = 4
    downlink_irs: int = 4
    device_height: float = 1.0
    irs_height: float = 10.0
    ap_xy_fraction: List[float] = field(default_factory=lambda: [0.5, 0.5])
    ap_height: float = 10.0
    ud_x: List[float] = field(default_factory=lambda: [0.0, 0.5])
    dd_x: List[float] = field(default_factory=lambda: [0.5, 1.0])
    ur_x: List[float] = field(default_factory=lambda: [0.125, 0.5])
    dr_x: List[float] = field(default_factory=lambda: [0.5, 0.875])
    y_range: List[float] = field(default_factory=lambda: [0.0, 1.0])


@dataclass
class MobilityConfig:
    """Random-waypoint head and reference-point group members."""
    v_min: float = 0.5  # m per coherence interval
    v_max: float = 2.0
    pause_slots: int = 5
    alpha_max: float = 0.2  # deviation factors drawn from (-alpha_max, alpha_max)
    steps: int = 0  # mobility intervals applied before each trial's snapshot


@dataclass
class RunConfig:
    """Monte Carlo and solver settings."""
    trials: int = 1000
    base_seed: int = 0
    algorithms: List[str] = field(default_factory=lambda: list(ALGORITHMS))
    coherence_slots: int = 200
    es_cap: int = 9
    with_overhead: bool = False
    waterfill_eps: float = 1e-6
    waterfill_max_iters: int = 500
    taxation: Optional[List[float]] = None  # per-device taxation multipliers, default zeros
    workers: int = 1
    log_level: str = "INFO"


_SECTIONS = {
    "radio": RadioConfig,
    "csi": CsiConfig,
    "geometry": GeometryConfig,
    "mobility": MobilityConfig,
    "run": RunConfig,
}


def _flat_index() -> Dict[str, str]:
    index = {}
    for section, cls in _SECTIONS.items():
        for f in fields(cls):
            index[f.name] = section
    return index


@dataclass
class ExperimentConfig:
    """Main configuration class."""
    radio: RadioConfig = field(default_factory=RadioConfig)
    csi: CsiConfig = field(default_factory=CsiConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    mobility: MobilityConfig = field(default_factory=MobilityConfig)
    run: RunConfig = field(default_factory=RunConfig)

    @classmethod
    def load(cls, config_path: Optional[str] = None) -> "ExperimentConfig":
        """Load configuration from file and environment variables."""
        config = cls()

        if config_path is not None:
            path = Path(config_path)
            if not path.exists():
                raise ConfigError(f"Config file not found: {config_path}")
            with open(path) as f:
                if path.suffix in ('.yaml', '.yml'):
                    data = yaml.safe_load(f) or {}
                else:
                    data = json.load(f)
            if not isinstance(data, dict):
                raise ConfigError(f"Config file {config_path} must hold a mapping")
            config = cls.from_dict(data)

        config.run.log_level = os.getenv("IRSSIM_LOG_LEVEL", config.run.log_level)
        config.validate()
        return config

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        """Create config from a nested (`radio: {...}`) or flat (`antennas: 64`) mapping."""
        index = _flat_index()
        sections: Dict[str, Dict[str, Any]] = {name: {} for name in _SECTIONS}

        for key, value in data.items():
            if key in _SECTIONS and isinstance(value, dict):
                known = {f.name for f in fields(_SECTIONS[key])}
                for sub_key, sub_value in value.items():
                    if sub_key in known:
                        sections[key][sub_key] = sub_value
                    else:
                        logger.warning(f"Ignoring unknown config key '{key}.{sub_key}'")
            elif key in index:
                sections[index[key]][key] = value
            else:
                logger.warning(f"Ignoring unknown config key '{key}'")

        return cls(**{name: _SECTIONS[name](**values) for name, values in sections.items()})

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to a nested dictionary."""
        return {name: asdict(getattr(self, name)) for name in _SECTIONS}

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Return a copy with flat keys (e.g. `trials=10`) replaced; `None` values are skipped."""
        index = _flat_index()
        updated = copy.deepcopy(self)
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in index:
                raise ConfigError(f"Unknown config key '{key}'")
            setattr(getattr(updated, index[key]), key, value)
        updated.validate()
        return updated

    def validate(self) -> None:
        """Reject configurations with non-physical or inconsistent values."""
        r, g, m, run = self.radio, self.geometry, self.mobility, self.run
        positive = {
            "carrier_freq_ghz": r.carrier_freq_ghz,
            "bandwidth_ghz": r.bandwidth_ghz,
            "element_spacing_wl": r.element_spacing_wl,
            "element_side_wl": r.element_side_wl,
            "antenna_spacing_wl": r.antenna_spacing_wl,
            "device_height": g.device_height,
            "irs_height": g.irs_height,
            "ap_height": g.ap_height,
            "coherence_slots": run.coherence_slots,
            "waterfill_eps": run.waterfill_eps,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        counts = {
            "antennas": r.antennas,
            "irs_side": r.irs_side,
            "uplink_devices": g.uplink_devices,
            "downlink_devices": g.downlink_devices,
            "uplink_irs": g.uplink_irs,
            "downlink_irs": g.downlink_irs,
            "trials": run.trials,
            "workers": run.workers,
            "es_cap": run.es_cap,
            "waterfill_max_iters": run.waterfill_max_iters,
        }
        for name, value in counts.items():
            if int(value) != value or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value}")
        if r.kappa_abs < 0:
            raise ConfigError(f"kappa_abs must be non-negative, got {r.kappa_abs}")
        if len(r.gains_dbi) != 4:
            raise ConfigError("gains_dbi needs four values: G_AP, G_elem_in, G_elem_out, G_dev")
        if self.csi.sigma2_g < 0 or self.csi.sigma2_G < 0:
            raise ConfigError("CEE variances must be non-negative")
        if len(g.area) != 2 or min(g.area) <= 0:
            raise ConfigError(f"area must be two positive lengths, got {g.area}")
        for name in ("ud_x", "dd_x", "ur_x", "dr_x", "y_range", "ap_xy_fraction"):
            pair = getattr(g, name)
            if len(pair) != 2:
                raise ConfigError(f"{name} needs two values, got {pair}")
            lo, hi = pair
            if name != "ap_xy_fraction" and lo > hi:
                raise ConfigError(f"{name} must be an increasing range, got {pair}")
            if not (0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
                raise ConfigError(f"{name} must be fractions of the area in [0, 1], got {getattr(g, name)}")
        if not 0 <= m.v_min <= m.v_max:
            raise ConfigError(f"need 0 <= v_min <= v_max, got {m.v_min}, {m.v_max}")
        if m.pause_slots < 0 or m.steps < 0:
            raise ConfigError("pause_slots and steps must be non-negative")
        if not 0 <= m.alpha_max < 1:
            raise ConfigError(f"alpha_max must lie in [0, 1), got {m.alpha_max}")
        unknown = [a for a in run.algorithms if a not in ALGORITHMS]
        if unknown or not run.algorithms:
            raise ConfigError(f"algorithms must be a non-empty subset of {ALGORITHMS}, got {run.algorithms}")
        if run.taxation is not None and len(run.taxation) != g.downlink_devices:
            raise ConfigError("taxation needs one value per downlink device")
        if str(run.log_level).upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigError(f"unknown log level '{run.log_level}'")
