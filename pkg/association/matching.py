"""UR-proposing deferred acceptance and stability checks."""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from utils.errors import InvariantViolation
from .types import AssociationMatrix, PriorityMatrices, RateMatrix

logger = logging.getLogger(__name__)


def rate_matrix(ul_sums: Sequence[float], dl_sums: Sequence[float]) -> RateMatrix:
    """R[l, m] = min(ul_sums[l], dl_sums[m])."""
    ul = np.asarray(ul_sums, dtype=float).ravel()
    dl = np.asarray(dl_sums, dtype=float).ravel()
    if np.any(ul < 0) or np.any(dl < 0):
        raise ValueError("sum rates must be non-negative")
    return RateMatrix(np.minimum.outer(ul, dl), ul, dl)


def build_preferences(rates: RateMatrix) -> PriorityMatrices:
    """Rows sorted by descending rate, ties by ascending index."""
    ur_pref = np.argsort(-rates.R, axis=1, kind="stable")
    dr_pref = np.argsort(-rates.R.T, axis=1, kind="stable")
    return PriorityMatrices(ur_pref, dr_pref)


def gale_shapley(prefs: PriorityMatrices, rates: RateMatrix) -> AssociationMatrix:
    """Deferred acceptance with URs proposing.

    In every round each free UR with DRs left on its list proposes, in
    ascending index order, to its best untried DR. A DR holding a proposal
    swaps only for a strictly higher rate. tau is the number of proposals.
    """
    R = rates.R
    L, M = R.shape
    next_choice = [0] * L
    holder = {}  # DR -> UR
    matched = [False] * L
    proposals = 0

    while True:
        free = [l for l in range(L) if not matched[l] and next_choice[l] < M]
        if not free:
            break
        for l in free:
            m = int(prefs.ur_pref[l][next_choice[l]])
            next_choice[l] += 1
            proposals += 1
            incumbent = holder.get(m)
            if incumbent is None:
                holder[m] = l
                matched[l] = True
            elif R[l, m] > R[incumbent, m]:
                holder[m] = l
                matched[l] = True
                matched[incumbent] = False

    if proposals > L * M:
        raise InvariantViolation(f"deferred acceptance made {proposals} proposals for {L}x{M}")

    pairs = {l: m for m, l in holder.items()}
    logger.debug(f"Deferred acceptance: {proposals} proposals, {len(pairs)} pairs")
    return AssociationMatrix(pairs, "gs", tau=proposals, evaluations=proposals)


def blocking_pairs(assoc: AssociationMatrix, rates: RateMatrix) -> List[Tuple[int, int]]:
    """Pairs (l, m) where both sides strictly prefer each other to their partners."""
    R = rates.R
    dr_partner = assoc.partner_of_dr()
    blocking = []
    for l in range(rates.L):
        current_l = R[l, assoc.pairs[l]] if l in assoc.pairs else -np.inf
        for m in range(rates.M):
            if assoc.pairs.get(l) == m:
                continue
            current_m = R[dr_partner[m], m] if m in dr_partner else -np.inf
            if R[l, m] > current_l and R[l, m] > current_m:
                blocking.append((l, m))
    return blocking


def is_stable(assoc: AssociationMatrix, rates: RateMatrix) -> bool:
    return not blocking_pairs(assoc, rates)


def sum_rate_of(assoc: AssociationMatrix, rates: RateMatrix) -> float:
    """Total rate of the paired URs and DRs, before overhead."""
    return float(sum(rates.R[l, m] for l, m in sorted(assoc.pairs.items())))
