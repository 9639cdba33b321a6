"""Shared fixtures."""

import os
from pathlib import Path

import numpy as np
import pytest

from channel.cee import CeeParams
from channel.irs import PhaseConfig, cascade
from linproc.mmse import LinkEnsemble
from utils.config import ExperimentConfig


def small_config(**overrides) -> ExperimentConfig:
    """A desk-sized experiment: few antennas, tiny IRSs, three of everything."""
    settings = dict(
        antennas=4,
        irs_side=3,
        uplink_devices=3,
        downlink_devices=3,
        uplink_irs=3,
        downlink_irs=3,
        gains_dbi=[25.0, 25.0, 25.0, 25.0],
        trials=2,
        log_level="WARNING",
    )
    settings.update(overrides)
    return ExperimentConfig().with_overrides(**settings)


GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def assert_matches_golden(name: str, text: str) -> None:
    """Compare `text` byte for byte with tests/golden/`name`.

    A missing file, or IRSSIM_UPDATE_GOLDEN=1, writes the golden instead and skips.
    """
    path = GOLDEN_DIR / name
    if os.getenv("IRSSIM_UPDATE_GOLDEN") == "1" or not path.exists():
        path.write_bytes(text.encode("utf-8"))
        pytest.skip(f"wrote {path.name}; commit it to pin the output")
    assert text.encode("utf-8") == path.read_bytes()


def complex_normal(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_ensemble(rng: np.random.Generator, antennas: int, devices: int, elements: int = 3,
                    cee: CeeParams = CeeParams(), noise: float = 0.1, powers=None) -> LinkEnsemble:
    """Devices behind one IRS with Gaussian hops and random phases."""
    G = complex_normal(rng, antennas, elements)
    phases = PhaseConfig.random(elements, rng)
    channels = [cascade(G, phases, complex_normal(rng, elements), cee) for _ in range(devices)]
    if powers is None:
        powers = rng.uniform(0.5, 2.0, size=devices)
    return LinkEnsemble(channels, powers, noise)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def config():
    return small_config()
