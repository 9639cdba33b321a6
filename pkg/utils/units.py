"""Unit conversions used across the link budget."""

import math

SPEED_OF_LIGHT = 299_792_458.0  # m/s


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_w: float) -> float:
    return 10.0 * math.log10(p_w) + 30.0


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def wavelength(carrier_freq_hz: float) -> float:
    return SPEED_OF_LIGHT / carrier_freq_hz


def noise_power(n0_dbm_per_hz: float, bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power in watts: N0 + 10 log10(B) + NF, in dBm, converted."""
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    sigma2_dbm = n0_dbm_per_hz + 10.0 * math.log10(bandwidth_hz) + noise_figure_db
    return dbm_to_watts(sigma2_dbm)
