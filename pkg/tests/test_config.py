import json
import logging
from pathlib import Path

import pytest
import yaml

from utils.config import ExperimentConfig
from utils.errors import ConfigError


def test_defaults_match_reference_scenario():
    config = ExperimentConfig()
    assert config.radio.carrier_freq_ghz == 300
    assert config.radio.antennas == 64
    assert config.radio.elements == 100 * 100
    assert config.geometry.area == [40.0, 40.0]
    assert config.run.coherence_slots == 200
    assert config.radio.power_w == pytest.approx(0.19952623, rel=1e-6)
    assert config.radio.noise_power_w == pytest.approx(3.981e-10, rel=1e-3)
    assert config.radio.wavelength == pytest.approx(0.999308e-3, rel=1e-5)


def test_load_flat_yaml(tmp_path):
    path = tmp_path / "exp.yaml"
    path.write_text(yaml.safe_dump({"antennas": 16, "sigma2_g": 0.3, "trials": 5}))

    config = ExperimentConfig.load(str(path))

    assert config.radio.antennas == 16
    assert config.csi.sigma2_g == 0.3
    assert config.run.trials == 5


def test_load_sectioned_json(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({"radio": {"irs_side": 20}, "mobility": {"v_max": 3.0}}))

    config = ExperimentConfig.load(str(path))

    assert config.radio.irs_side == 20
    assert config.mobility.v_max == 3.0


def test_shipped_default_file_loads():
    config = ExperimentConfig.load(str(Path(__file__).resolve().parent.parent / "config" / "default.yaml"))
    assert config.to_dict() == ExperimentConfig().to_dict()


def test_unknown_keys_are_ignored_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        config = ExperimentConfig.from_dict({"antennas": 8, "warp_drive": True})
    assert config.radio.antennas == 8
    assert "warp_drive" in caplog.text


def test_env_overrides_log_level(monkeypatch):
    monkeypatch.setenv("IRSSIM_LOG_LEVEL", "DEBUG")
    assert ExperimentConfig.load().run.log_level == "DEBUG"


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.load(str(tmp_path / "nope.yaml"))


def test_with_overrides_copies_and_validates():
    base = ExperimentConfig()
    changed = base.with_overrides(antennas=8, trials=None)

    assert changed.radio.antennas == 8
    assert base.radio.antennas == 64
    assert changed.run.trials == base.run.trials
    with pytest.raises(ConfigError):
        base.with_overrides(flux_capacitor=1)


@pytest.mark.parametrize("overrides", [
    {"antennas": 0},
    {"bandwidth_ghz": -1.0},
    {"kappa_abs": -0.1},
    {"sigma2_G": -0.5},
    {"area": [40.0]},
    {"ud_x": [0.6, 0.4]},
    {"v_min": 3.0, "v_max": 2.0},
    {"alpha_max": 1.0},
    {"algorithms": ["gs", "hungarian"]},
    {"gains_dbi": [0.0, 0.0]},
    {"taxation": [0.0]},
    {"log_level": "LOUD"},
])
def test_invalid_values_rejected(overrides):
    with pytest.raises(ConfigError):
        ExperimentConfig().with_overrides(**overrides)


def test_round_trip_through_dict():
    config = ExperimentConfig().with_overrides(antennas=32, sigma2_g=0.0)
    assert ExperimentConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()
