"""Data types shared by the association algorithms."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from utils.errors import DimensionError


@dataclass(eq=False)
class RateMatrix:
    """R[l, m]: end-to-end rate (bits/s/Hz, no overhead) of pairing UR l with DR m."""
    R: np.ndarray
    ul_sums: Optional[np.ndarray] = None
    dl_sums: Optional[np.ndarray] = None

    def __post_init__(self):
        self.R = np.atleast_2d(np.asarray(self.R, dtype=float))
        if self.R.ndim != 2:
            raise DimensionError(f"rate matrix must be 2-D, got shape {self.R.shape}")
        if not np.all(np.isfinite(self.R)) or np.any(self.R < 0):
            raise ValueError("rates must be finite and non-negative")

    @property
    def L(self) -> int:
        return self.R.shape[0]

    @property
    def M(self) -> int:
        return self.R.shape[1]


@dataclass(eq=False)
class PriorityMatrices:
    ur_pref: np.ndarray  # L x M, DR indices by descending rate
    dr_pref: np.ndarray  # M x L


@dataclass
class AssociationMatrix:
    """One-to-one UR -> DR pairing with the overhead it cost to find."""
    pairs: Dict[int, int]
    algorithm: str
    tau: int = 0
    evaluations: int = 0  # permutations scored or proposals made
    stable: Optional[bool] = field(default=None)

    def __post_init__(self):
        self.pairs = {int(l): int(m) for l, m in self.pairs.items()}
        if len(set(self.pairs.values())) != len(self.pairs):
            raise ValueError(f"association is not one-to-one: {self.pairs}")
        if self.tau < 0:
            raise ValueError(f"tau must be non-negative, got {self.tau}")

    def partner_of_dr(self) -> Dict[int, int]:
        return {m: l for l, m in self.pairs.items()}

    def as_list(self) -> List[List[int]]:
        return [[l, m] for l, m in sorted(self.pairs.items())]

    def to_psi(self, L: int, M: int) -> np.ndarray:
        """Binary L x M indicator matrix."""
        psi = np.zeros((L, M), dtype=int)
        for l, m in self.pairs.items():
            psi[l, m] = 1
        return psi
