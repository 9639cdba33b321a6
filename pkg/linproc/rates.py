"""Spectral efficiency and end-to-end rates."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class RatePair:
    ul_sum: float  # bits/s/Hz
    dl_sum: float

    def e2e(self, tau: int = 0, coherence_slots: int = 1) -> float:
        return e2e_rate(self.ul_sum, self.dl_sum, tau, coherence_slots)


def sum_rate(sinrs: Sequence[float]) -> float:
    """Sum of log2(1 + SINR) in bits/s/Hz."""
    sinrs = np.asarray(sinrs, dtype=float)
    if np.any(sinrs < 0):
        raise ValueError("SINR values must be non-negative")
    return float(np.sum(np.log2(1.0 + sinrs)))


def e2e_rate(ul_sum: float, dl_sum: float, tau: float, coherence_slots: float) -> float:
    """(1 - tau/T) * min(ul_sum, dl_sum)."""
    if coherence_slots <= 0:
        raise ValueError(f"coherence interval must be positive, got {coherence_slots}")
    if not 0 <= tau <= coherence_slots:
        raise ValueError(f"overhead of {tau} slots does not fit a {coherence_slots}-slot interval")
    return (1.0 - tau / coherence_slots) * min(ul_sum, dl_sum)
