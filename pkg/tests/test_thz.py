import math

import numpy as np
import pytest

from channel.thz import ThzParams, pathloss_cascaded, segment_channel, segment_pathloss
from utils.config import RadioConfig
from utils.errors import ConfigError, GeometryError


def unit_params(**kwargs):
    """Parameters with lambda chosen so the element area is exactly 1 m^2."""
    settings = dict(carrier_freq=299_792_458.0 * 0.4, kappa_abs=0.0)
    settings.update(kwargs)
    return ThzParams(**settings)


def test_unit_pathloss():
    params = unit_params()
    assert params.element_area == pytest.approx(1.0)
    assert pathloss_cascaded(1.0, 1.0, params) == pytest.approx(1.0 / (16.0 * math.pi ** 2))


def test_pathloss_matches_closed_form_at_300ghz():
    params = ThzParams(carrier_freq=300e9)
    lam = params.wavelength
    area = (0.4 * lam) ** 2
    expected = area ** 2 * math.exp(-0.0033 * 30.0) / (4 * math.pi * 10.0 * 20.0) ** 2
    assert pathloss_cascaded(10.0, 20.0, params) == pytest.approx(expected, rel=1e-12)


def test_absorption_and_distance_reduce_gain():
    params = ThzParams(carrier_freq=300e9)
    dry = ThzParams(carrier_freq=300e9, kappa_abs=0.0)
    assert pathloss_cascaded(10.0, 10.0, params) < pathloss_cascaded(10.0, 10.0, dry)
    assert pathloss_cascaded(10.0, 20.0, params) < pathloss_cascaded(10.0, 10.0, params)


def test_pathloss_scales_with_gains():
    base = ThzParams(carrier_freq=300e9)
    boosted = ThzParams(carrier_freq=300e9, gains=(2.0, 1.0, 3.0, 1.0))
    ratio = pathloss_cascaded(5.0, 7.0, boosted) / pathloss_cascaded(5.0, 7.0, base)
    assert ratio == pytest.approx(6.0)


def test_segments_multiply_to_cascade():
    params = ThzParams(carrier_freq=300e9, gains=(2.0, 3.0, 5.0, 7.0))
    g_ap, g_in, g_out, g_dev = params.gains
    split = segment_pathloss(4.0, g_dev, g_in, params) * segment_pathloss(9.0, g_out, g_ap, params)
    assert split == pytest.approx(pathloss_cascaded(4.0, 9.0, params), rel=1e-12)


def test_segment_pathloss_vectorizes():
    params = ThzParams(carrier_freq=300e9)
    losses = segment_pathloss(np.array([1.0, 2.0]), 1.0, 1.0, params)
    assert losses.shape == (2,)
    assert isinstance(segment_pathloss(1.0, 1.0, 1.0, params), float)


@pytest.mark.parametrize("d1, d2", [(0.0, 1.0), (1.0, -2.0)])
def test_non_positive_distance_rejected(d1, d2):
    with pytest.raises(GeometryError):
        pathloss_cascaded(d1, d2, ThzParams(carrier_freq=300e9))


def test_segment_channel_amplitude_and_phase():
    wavenumber = 2 * math.pi / 1e-3
    h = segment_channel(np.array([[0.25e-3, 1e-3]]), 4.0, wavenumber)
    assert h.shape == (1, 2)
    np.testing.assert_allclose(np.abs(h), 2.0)
    assert h[0, 0] == pytest.approx(-2j)
    assert h[0, 1] == pytest.approx(2.0)


def test_params_validation_and_config():
    with pytest.raises(ConfigError):
        ThzParams(carrier_freq=0.0)
    with pytest.raises(ConfigError):
        ThzParams(carrier_freq=1e9, gains=(1.0, 1.0, 1.0))
    params = ThzParams.from_config(RadioConfig(gains_dbi=[10.0, 0.0, 0.0, 10.0]))
    assert params.total_gain == pytest.approx(100.0)
    assert params.wavenumber == pytest.approx(2 * math.pi / params.wavelength)
