import numpy as np
import pytest

from channel.cee import CeeParams, correlation, inject_cee, mean_power
from utils.config import CsiConfig
from utils.errors import ConfigError


def test_params():
    assert CeeParams().perfect
    assert not CeeParams.from_config(CsiConfig()).perfect
    with pytest.raises(ConfigError):
        CeeParams(sigma2_g=-0.1)


def test_zero_variance_returns_copy(rng):
    g_hat = np.array([1 + 1j, 2 - 1j])
    g = inject_cee(g_hat, 0.0, rng)
    np.testing.assert_array_equal(g, g_hat)
    g[0] = 0
    assert g_hat[0] == 1 + 1j


@pytest.mark.parametrize("sigma2", [0.1, 0.5, 1.0])
def test_correlation_matches_variance(sigma2):
    rng = np.random.default_rng(42)
    g_hat = np.exp(1j * rng.uniform(0, 2 * np.pi, size=1_000_000))
    g = inject_cee(g_hat, sigma2, rng)
    assert correlation(g, g_hat) == pytest.approx(1.0 / np.sqrt(1.0 + sigma2), rel=0.01)


def test_error_variance_scales_with_estimate_power(rng):
    g_hat = 3.0 * np.ones((400, 500), dtype=complex)
    g = inject_cee(g_hat, 0.2, rng)
    assert g.shape == g_hat.shape
    assert mean_power(g - g_hat) == pytest.approx(0.2 * 9.0, rel=0.02)


def test_negative_variance_rejected(rng):
    with pytest.raises(ConfigError):
        inject_cee(np.ones(3), -1.0, rng)


def test_correlation_edge_cases():
    assert correlation(np.zeros(3), np.ones(3)) == 0.0
    assert correlation(np.ones(3), 2j * np.ones(3)) == pytest.approx(1.0)
    assert mean_power(np.array([])) == 0.0
