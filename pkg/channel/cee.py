"""Channel-estimation error model.

A true channel is its estimate plus an uncorrelated circular Gaussian error
whose per-entry variance is sigma2 times the mean per-entry power of the
estimate, so the true/estimate correlation is 1/sqrt(1 + sigma2).
"""

import logging
from dataclasses import dataclass

import numpy as np

from utils.config import CsiConfig
from utils.errors import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CeeParams:
    sigma2_g: float = 0.0  # device <-> IRS hop
    sigma2_G: float = 0.0  # IRS <-> AP hop

    def __post_init__(self):
        if self.sigma2_g < 0 or self.sigma2_G < 0:
            raise ConfigError(f"CEE variances must be non-negative, got {self.sigma2_g}, {self.sigma2_G}")

    @property
    def perfect(self) -> bool:
        return self.sigma2_g == 0 and self.sigma2_G == 0

    @classmethod
    def from_config(cls, csi: CsiConfig) -> "CeeParams":
        return cls(csi.sigma2_g, csi.sigma2_G)


def mean_power(values: np.ndarray) -> float:
    """Mean per-entry power |x|^2."""
    values = np.asarray(values)
    return float(np.mean(np.abs(values) ** 2)) if values.size else 0.0


def inject_cee(g_hat: np.ndarray, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """Draw a true channel around the estimate `g_hat` (vector or matrix)."""
    if sigma2 < 0:
        raise ConfigError(f"CEE variance must be non-negative, got {sigma2}")
    g_hat = np.asarray(g_hat, dtype=complex)
    if sigma2 == 0:
        return g_hat.copy()
    scale = np.sqrt(sigma2 * mean_power(g_hat) / 2.0)
    error = scale * (rng.standard_normal(g_hat.shape) + 1j * rng.standard_normal(g_hat.shape))
    return g_hat + error


def correlation(true: np.ndarray, estimate: np.ndarray) -> float:
    """Empirical correlation coefficient |<estimate, true>| / (||true|| ||estimate||)."""
    true = np.ravel(np.asarray(true, dtype=complex))
    estimate = np.ravel(np.asarray(estimate, dtype=complex))
    norm = np.linalg.norm(true) * np.linalg.norm(estimate)
    if norm == 0:
        return 0.0
    return float(abs(np.vdot(estimate, true)) / norm)
