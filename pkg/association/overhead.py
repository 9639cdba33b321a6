"""Time slots each association algorithm spends inside a coherence interval."""

import math
from typing import Optional

from utils.config import ALGORITHMS


def overhead_slots(algorithm: str, L: int, M: int, coherence_slots: int,
                   proposals: Optional[int] = None) -> int:
    """Slots charged against the coherence interval, never more than the interval itself.

    Deferred acceptance pays one slot per proposal, exhaustive search one per
    scored pairing, greedy one per UR and random a single slot.
    """
    if coherence_slots <= 0:
        raise ValueError(f"coherence interval must be positive, got {coherence_slots}")
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm '{algorithm}'")
    if algorithm == "gs":
        if proposals is None:
            raise ValueError("deferred acceptance overhead needs the proposal count")
        slots = proposals
    elif algorithm == "es":
        slots = math.perm(max(L, M), min(L, M))
    elif algorithm == "greedy":
        slots = L
    else:
        slots = 1
    return min(slots, coherence_slots)
