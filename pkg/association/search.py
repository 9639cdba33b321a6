"""Exhaustive search and the greedy and random baselines."""

import itertools
import logging
from collections import defaultdict

import numpy as np

from utils.errors import SearchLimitError
from .types import AssociationMatrix, RateMatrix

logger = logging.getLogger(__name__)

DEFAULT_ES_CAP = 9


def exhaustive(rates: RateMatrix, cap: int = DEFAULT_ES_CAP) -> AssociationMatrix:
    """Score every one-to-one pairing and keep the first best in lexicographic order.

    When L != M the larger side is permuted and the surplus IRSs stay idle.
    tau is the number of pairings evaluated.
    """
    L, M = rates.L, rates.M
    if max(L, M) > cap:
        raise SearchLimitError(f"exhaustive search over {max(L, M)} IRSs exceeds the cap of {cap}")

    rows = rates.R.tolist()
    best_sum, best_perm, evaluations = -1.0, None, 0
    if L <= M:
        for perm in itertools.permutations(range(M), L):
            evaluations += 1
            total = sum(rows[l][m] for l, m in enumerate(perm))
            if total > best_sum:
                best_sum, best_perm = total, perm
        pairs = {l: m for l, m in enumerate(best_perm)}
    else:
        for perm in itertools.permutations(range(L), M):
            evaluations += 1
            total = sum(rows[l][m] for m, l in enumerate(perm))
            if total > best_sum:
                best_sum, best_perm = total, perm
        pairs = {l: m for m, l in enumerate(best_perm)}

    logger.debug(f"Exhaustive search scored {evaluations} pairings, best sum {best_sum:.6g}")
    return AssociationMatrix(pairs, "es", tau=evaluations, evaluations=evaluations)


def greedy(rates: RateMatrix, rng: np.random.Generator) -> AssociationMatrix:
    """Every UR asks for its best DR at once; contested DRs pick a winner uniformly.

    Losers then take their best remaining DR in UR index order.
    """
    R = rates.R
    L, M = R.shape
    wanted = defaultdict(list)
    for l in range(L):
        wanted[int(np.argmax(R[l]))].append(l)

    pairs, losers = {}, []
    for m in sorted(wanted):
        contenders = wanted[m]
        winner = contenders[0] if len(contenders) == 1 else int(rng.choice(contenders))
        pairs[winner] = m
        losers.extend(l for l in contenders if l != winner)

    taken = set(pairs.values())
    for l in sorted(losers):
        free = [m for m in range(M) if m not in taken]
        if not free:
            break
        m = max(free, key=lambda k: (R[l, k], -k))
        pairs[l] = m
        taken.add(m)

    return AssociationMatrix(pairs, "greedy", tau=L, evaluations=L)


def random_assoc(L: int, M: int, rng: np.random.Generator) -> AssociationMatrix:
    """Uniformly random one-to-one pairing of min(L, M) IRS pairs."""
    if L <= M:
        picks = rng.permutation(M)[:L]
        pairs = {l: int(m) for l, m in enumerate(picks)}
    else:
        picks = rng.permutation(L)[:M]
        pairs = {int(l): m for m, l in enumerate(picks)}
    return AssociationMatrix(pairs, "random", tau=1, evaluations=1)
