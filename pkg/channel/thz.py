"""THz pathloss with molecular absorption."""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from utils.config import RadioConfig
from utils.errors import ConfigError, GeometryError
from utils.units import wavelength as carrier_wavelength

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ThzParams:
    """Carrier and element parameters shared by every hop.

    `gains` holds the linear G_AP, G_elem_in, G_elem_out and G_dev factors.
    """
    carrier_freq: float  # Hz
    kappa_abs: float = 0.0033  # 1/m
    element_side_wl: float = 0.4
    gains: Tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        if not self.carrier_freq > 0:
            raise ConfigError(f"carrier frequency must be positive, got {self.carrier_freq}")
        if self.kappa_abs < 0:
            raise ConfigError(f"absorption coefficient must be non-negative, got {self.kappa_abs}")
        if not self.element_side_wl > 0:
            raise ConfigError(f"element side must be positive, got {self.element_side_wl}")
        if len(self.gains) != 4 or min(self.gains) <= 0:
            raise ConfigError(f"need four positive gain factors, got {self.gains}")

    @property
    def wavelength(self) -> float:
        return carrier_wavelength(self.carrier_freq)

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def element_side(self) -> float:
        return self.element_side_wl * self.wavelength

    @property
    def element_area(self) -> float:
        return self.element_side * self.element_side

    @property
    def total_gain(self) -> float:
        return float(np.prod(self.gains))

    @classmethod
    def from_config(cls, radio: RadioConfig) -> "ThzParams":
        return cls(
            carrier_freq=radio.carrier_freq_hz,
            kappa_abs=radio.kappa_abs,
            element_side_wl=radio.element_side_wl,
            gains=radio.gains_linear,
        )


def _check_distances(*distances: ArrayLike) -> None:
    for d in distances:
        if np.any(np.asarray(d) <= 0):
            raise GeometryError(f"distances must be positive, got {d}")


def pathloss_cascaded(d1: float, d2: float, params: ThzParams) -> float:
    """Linear power gain of a device-IRS-AP link over one element."""
    _check_distances(d1, d2)
    absorption = math.exp(-params.kappa_abs * (d1 + d2))
    spreading = (4.0 * math.pi * d1 * d2) ** 2
    return params.total_gain * params.element_area ** 2 * absorption / spreading


def segment_pathloss(d: ArrayLike, gain_a: float, gain_b: float, params: ThzParams) -> ArrayLike:
    """One hop of the cascaded pathloss; device-side times AP-side equals pathloss_cascaded."""
    _check_distances(d)
    d = np.asarray(d, dtype=float)
    loss = gain_a * gain_b * params.element_area * np.exp(-params.kappa_abs * d) / (4.0 * math.pi * d ** 2)
    return float(loss) if loss.ndim == 0 else loss


def segment_channel(distances: ArrayLike, pathloss: ArrayLike, wavenumber: float) -> np.ndarray:
    """Line-of-sight coefficients sqrt(l) * exp(-j * omega * d), elementwise over any shape."""
    distances = np.asarray(distances, dtype=float)
    pathloss = np.asarray(pathloss, dtype=float)
    if np.any(distances < 0):
        raise GeometryError("segment distances must be non-negative")
    if np.any(pathloss < 0):
        raise ValueError("pathloss must be non-negative")
    return np.sqrt(pathloss) * np.exp(-1j * wavenumber * distances)
