"""Linear combining under imperfect CSI: MMSE receivers and transmit beams.

Every SINR here treats channel-estimation error as extra interference: a
filter u leaks `channel.cee_term(u)` watts per transmitted watt.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
from scipy import linalg

from channel.irs import CascadedChannel
from utils.errors import DimensionError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class LinkEnsemble:
    """Devices sharing one IRS, with their powers and the receiver noise."""
    channels: List[CascadedChannel]
    powers: np.ndarray
    noise_power: float
    antennas: int = field(init=False)

    def __post_init__(self):
        if not self.channels:
            raise DimensionError("a link ensemble needs at least one channel")
        self.powers = np.asarray(self.powers, dtype=float).ravel()
        if self.powers.size != len(self.channels):
            raise DimensionError(f"{self.powers.size} powers for {len(self.channels)} channels")
        if np.any(self.powers < 0):
            raise ValueError("transmit powers must be non-negative")
        if not self.noise_power > 0:
            raise ValueError(f"noise power must be positive, got {self.noise_power}")
        sizes = {ch.antennas for ch in self.channels}
        if len(sizes) != 1:
            raise DimensionError(f"channels disagree on antenna count: {sorted(sizes)}")
        self.antennas = sizes.pop()

    def __len__(self) -> int:
        return len(self.channels)

    @property
    def H(self) -> np.ndarray:
        """K x I matrix of estimated channels."""
        return np.column_stack([ch.h_hat for ch in self.channels])

    def with_powers(self, powers: Sequence[float]) -> "LinkEnsemble":
        return LinkEnsemble(self.channels, np.asarray(powers, dtype=float), self.noise_power)


def _gain(u: np.ndarray, h: np.ndarray) -> float:
    return float(abs(np.vdot(u, h)) ** 2)


def _norm2(u: np.ndarray) -> float:
    return float(np.real(np.vdot(u, u)))


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0:
        unit = np.zeros_like(v)
        unit[0] = 1.0
        return unit
    return v / norm


def interference_covariance(ensemble: LinkEnsemble, i: int) -> np.ndarray:
    """sigma^2 I + sum_i' p_i' Cov_i' + sum_{i' != i} p_i' h_i' h_i'^H."""
    q = ensemble.noise_power * np.eye(ensemble.antennas, dtype=complex)
    for k, (ch, p) in enumerate(zip(ensemble.channels, ensemble.powers)):
        if p == 0:
            continue
        q += p * ch.effective_cov
        if k != i:
            q += p * np.outer(ch.h_hat, ch.h_hat.conj())
    return 0.5 * (q + q.conj().T)


def mmse_receive_vectors(ensemble: LinkEnsemble) -> List[np.ndarray]:
    """Unit-norm v_i proportional to Q_i^{-1} h_i."""
    decoders = []
    for i, ch in enumerate(ensemble.channels):
        q = interference_covariance(ensemble, i)
        decoders.append(_unit(linalg.solve(q, ch.h_hat, assume_a="her")))
    return decoders


def mmse_beamformers(ensemble: LinkEnsemble) -> List[np.ndarray]:
    """Downlink MMSE directions from the virtual uplink of the same ensemble."""
    return mmse_receive_vectors(ensemble)


def mrt_beamformers(ensemble: LinkEnsemble) -> List[np.ndarray]:
    return [_unit(ch.h_hat) for ch in ensemble.channels]


def zf_beamformers(ensemble: LinkEnsemble) -> List[np.ndarray]:
    """Columns w_j with h_j'^H w_j = 0 for j' != j, normalised."""
    W = linalg.pinv(ensemble.H.conj().T)
    return [_unit(W[:, j]) for j in range(W.shape[1])]


def uplink_sinr(ensemble: LinkEnsemble, decoders: Sequence[np.ndarray]) -> np.ndarray:
    """Per-device SINR for arbitrary decoders, CEE leakage counted per transmitter."""
    if len(decoders) != len(ensemble):
        raise DimensionError(f"{len(decoders)} decoders for {len(ensemble)} devices")
    chans, powers = ensemble.channels, ensemble.powers
    sinrs = np.zeros(len(ensemble))
    for i, v in enumerate(decoders):
        v = np.asarray(v, dtype=complex)
        signal = powers[i] * _gain(v, chans[i].h_hat)
        if signal == 0:
            continue
        interference = sum(powers[k] * _gain(v, chans[k].h_hat)
                           for k in range(len(chans)) if k != i)
        leakage = sum(p * ch.cee_term(v) for ch, p in zip(chans, powers))
        sinrs[i] = signal / (interference + leakage + ensemble.noise_power * _norm2(v))
    return sinrs


def dual_uplink_sinr(ensemble: LinkEnsemble, beamformers: Sequence[np.ndarray]) -> np.ndarray:
    """Virtual-uplink SINR of downlink beams; its per-user maximum is the MMSE closed form."""
    return uplink_sinr(ensemble, beamformers)


def mmse_sinr_closed_form(ensemble: LinkEnsemble) -> np.ndarray:
    """p_i h_i^H Q_i^{-1} h_i, computed without forming a decoder."""
    sinrs = np.zeros(len(ensemble))
    for i, ch in enumerate(ensemble.channels):
        if ensemble.powers[i] == 0:
            continue
        q = interference_covariance(ensemble, i)
        x = linalg.solve(q, ch.h_hat, assume_a="her")
        sinrs[i] = ensemble.powers[i] * float(np.real(np.vdot(ch.h_hat, x)))
    return sinrs


def downlink_sinr(ensemble: LinkEnsemble, beamformers: Sequence[np.ndarray]) -> np.ndarray:
    """Per-receiver SINR with CEE leakage of every beam through the receiver's own channel."""
    if len(beamformers) != len(ensemble):
        raise DimensionError(f"{len(beamformers)} beams for {len(ensemble)} devices")
    chans, powers = ensemble.channels, ensemble.powers
    beams = [np.asarray(w, dtype=complex) for w in beamformers]
    sinrs = np.zeros(len(ensemble))
    for j, ch in enumerate(chans):
        signal = powers[j] * _gain(beams[j], ch.h_hat)
        if signal == 0:
            continue
        interference = sum(powers[k] * _gain(beams[k], ch.h_hat)
                           for k in range(len(chans)) if k != j)
        leakage = sum(p * ch.cee_term(w) for w, p in zip(beams, powers))
        sinrs[j] = signal / (interference + leakage + ensemble.noise_power)
    return sinrs
