"""Downlink power allocation by iterative water-filling.

Each sweep visits the devices in order; for device j it recomputes the
interference seen at the current powers, finds the budget multiplier mu by
bracketed root finding, and applies the clamped closed-form power. Sweeps
stop once no power moves by more than eps.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from linproc.mmse import LinkEnsemble
from utils.errors import DimensionError, SolverError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class WaterfillInstance:
    """Fixed-beam downlink power problem.

    cross_gains[j, k] = |h_j^H w_k|^2 and cee_gains[j, k] is the CEE leakage
    of beam k into receiver j, per watt. The diagonals are the effective
    gains and the CEE self terms.
    """
    cross_gains: np.ndarray
    cee_gains: np.ndarray
    beam_norms: np.ndarray
    noise: np.ndarray
    budget: float
    taxation: Optional[np.ndarray] = None

    def __post_init__(self):
        self.cross_gains = np.atleast_2d(np.asarray(self.cross_gains, dtype=float))
        J = self.cross_gains.shape[0]
        if self.cross_gains.shape != (J, J):
            raise DimensionError(f"cross gains must be square, got {self.cross_gains.shape}")
        self.cee_gains = np.atleast_2d(np.asarray(self.cee_gains, dtype=float))
        if self.cee_gains.shape != (J, J):
            raise DimensionError(f"CEE gains must be {J} x {J}, got {self.cee_gains.shape}")
        self.beam_norms = np.broadcast_to(np.asarray(self.beam_norms, dtype=float), (J,)).copy()
        self.noise = np.broadcast_to(np.asarray(self.noise, dtype=float), (J,)).copy()
        taxation = np.zeros(J) if self.taxation is None else self.taxation
        self.taxation = np.broadcast_to(np.asarray(taxation, dtype=float), (J,)).copy()
        if np.any(self.cross_gains < 0) or np.any(self.cee_gains < 0):
            raise ValueError("gains must be non-negative")
        if np.any(self.beam_norms <= 0):
            raise ValueError("beam norms must be positive")
        if np.any(self.noise <= 0):
            raise ValueError("noise power must be positive")
        if not self.budget > 0:
            raise ValueError(f"power budget must be positive, got {self.budget}")
        if np.any(self.taxation < 0):
            raise ValueError("taxation multipliers must be non-negative")

    @property
    def size(self) -> int:
        return self.cross_gains.shape[0]

    @property
    def gains(self) -> np.ndarray:
        return np.diag(self.cross_gains).copy()

    @property
    def cee_self(self) -> np.ndarray:
        return np.diag(self.cee_gains).copy()

    @property
    def active(self) -> np.ndarray:
        return self.gains > 0

    def budget_used(self, p: Sequence[float]) -> float:
        return float(np.dot(self.beam_norms, p))


@dataclass(eq=False)
class PowerAllocation:
    p: np.ndarray
    mu: float
    taxation: np.ndarray
    iterations: int
    converged: bool
    residual: float = field(default=0.0)


def interference_term(instance: WaterfillInstance, p: Sequence[float], j: int) -> float:
    """Cross-talk plus CEE leakage from every other device's beam at receiver j."""
    p = np.asarray(p, dtype=float)
    row = instance.cross_gains[j] + instance.cee_gains[j]
    return float(np.dot(p, row) - p[j] * row[j])


def interference_vector(instance: WaterfillInstance, p: Sequence[float]) -> np.ndarray:
    return np.array([interference_term(instance, p, j) for j in range(instance.size)])


def sinr(instance: WaterfillInstance, p: Sequence[float]) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    iota = interference_vector(instance, p)
    return p * instance.gains / (iota + p * instance.cee_self + instance.noise)


def objective(instance: WaterfillInstance, p: Sequence[float]) -> float:
    """Downlink sum rate in bits/s/Hz."""
    return float(np.sum(np.log2(1.0 + sinr(instance, p))))


def surrogate_objective(instance: WaterfillInstance, p: Sequence[float]) -> float:
    """Concave per-user utility (nats) whose stationarity condition is the closed form.

    Without CEE and cross-talk it equals the sum rate times ln 2.
    """
    p = np.asarray(p, dtype=float)
    h, x = instance.gains, instance.cee_self
    iota = interference_vector(instance, p)
    active = h > 0
    weight = h[active] / (h[active] + x[active])
    return float(np.sum(weight * np.log1p(p[active] * (h[active] + x[active])
                                          / (iota[active] + instance.noise[active]))))


def closed_form_power(instance: WaterfillInstance, iota: float, mu: float, upsilon: float,
                      j: int) -> float:
    """[(1/(mu ||w||^2 + upsilon) - (iota + sigma^2)/h) / (1 + X/h)]^+."""
    h = instance.gains[j]
    if h <= 0:
        return 0.0
    level = mu * instance.beam_norms[j] + upsilon
    if not level > 0:
        raise SolverError(f"multiplier combination must be positive, got {level}")
    floor = (iota + instance.noise[j]) / h
    water = 1.0 / level - floor
    if water <= 0:
        return 0.0
    return water / (1.0 + instance.cee_self[j] / h)


def _powers_at(instance: WaterfillInstance, iota: np.ndarray, mu: float,
               upsilon: np.ndarray) -> np.ndarray:
    return np.array([closed_form_power(instance, iota[j], mu, upsilon[j], j)
                     for j in range(instance.size)])


def bisect_mu(instance: WaterfillInstance, iota: Sequence[float],
              upsilon: Optional[Sequence[float]] = None) -> float:
    """Budget multiplier mu with sum_j ||w_j||^2 p_j(mu) = P.

    The upper bracket end is the smallest mu that switches every device off;
    the lower end is halved until the budget is exceeded.
    """
    iota = np.asarray(iota, dtype=float)
    upsilon = instance.taxation if upsilon is None else np.asarray(upsilon, dtype=float)
    active = instance.active
    if not np.any(active):
        raise SolverError("no device has a positive effective gain")

    h, w = instance.gains[active], instance.beam_norms[active]
    mu_hi = float(np.max((h / (iota[active] + instance.noise[active]) - upsilon[active]) / w))
    if mu_hi <= 0:
        # taxation alone switches every device off
        return 0.0

    def excess(mu: float) -> float:
        return instance.budget_used(_powers_at(instance, iota, mu, upsilon)) - instance.budget

    # taxation alone can keep every device under budget; the budget is then slack
    if np.all(upsilon[active] > 0) and excess(0.0) <= 0:
        return 0.0

    mu_lo = mu_hi / 2.0
    for _ in range(2048):
        if excess(mu_lo) >= 0:
            break
        mu_lo /= 2.0
        if mu_lo == 0.0:
            break
    else:
        mu_lo = 0.0
    if mu_lo == 0.0:
        raise SolverError("could not bracket the budget multiplier")
    if excess(mu_lo) == 0:
        return mu_lo
    return float(optimize.brentq(excess, mu_lo, mu_hi, xtol=1e-300, maxiter=500))


def kkt_residual(instance: WaterfillInstance, allocation: PowerAllocation) -> float:
    """Largest relative stationarity error over active devices, and clamp violation over idle ones."""
    p = allocation.p
    iota = interference_vector(instance, p)
    h, x = instance.gains, instance.cee_self
    worst = 0.0
    for j in range(instance.size):
        if h[j] <= 0:
            continue
        level = allocation.mu * instance.beam_norms[j] + allocation.taxation[j]
        if level <= 0:
            return math.inf
        if p[j] > 0:
            marginal = h[j] / (iota[j] + instance.noise[j] + p[j] * (h[j] + x[j]))
            worst = max(worst, abs(marginal - level) / level)
        else:
            marginal = h[j] / (iota[j] + instance.noise[j])
            worst = max(worst, max(0.0, marginal - level) / level)
    return worst


def waterfill(instance: WaterfillInstance, eps: float = 1e-6, max_iters: int = 500,
              initial: Optional[Sequence[float]] = None) -> PowerAllocation:
    if not eps > 0:
        raise ValueError(f"convergence tolerance must be positive, got {eps}")
    J = instance.size
    upsilon = instance.taxation
    if not np.any(instance.active):
        logger.warning("No device has a positive effective gain; allocating zero power")
        return PowerAllocation(np.zeros(J), 0.0, upsilon, 0, True)

    p = np.full(J, instance.budget / J) if initial is None else np.asarray(initial, dtype=float).copy()
    mu, converged, iterations = 0.0, False, 0
    for iterations in range(1, max_iters + 1):
        delta = 0.0
        for j in range(J):
            iota = interference_vector(instance, p)
            mu = bisect_mu(instance, iota, upsilon)
            updated = closed_form_power(instance, iota[j], mu, upsilon[j], j)
            delta = max(delta, abs(updated - p[j]))
            p[j] = updated
        if delta <= eps:
            converged = True
            break

    # one joint update so all devices share the final multiplier
    iota = interference_vector(instance, p)
    mu = bisect_mu(instance, iota, upsilon)
    p = _powers_at(instance, iota, mu, upsilon)

    used = instance.budget_used(p)
    if used > instance.budget:
        p *= instance.budget / used

    allocation = PowerAllocation(p, mu, upsilon, iterations, converged)
    allocation.residual = kkt_residual(instance, allocation)
    if not converged:
        logger.warning(f"Water-filling stopped after {max_iters} sweeps without converging")
    else:
        logger.debug(f"Water-filling converged in {iterations} sweeps, mu={mu:.6g}")
    return allocation


def instance_from_downlink(ensemble: LinkEnsemble, beamformers: Sequence[np.ndarray],
                           budget: float, taxation: Optional[Sequence[float]] = None
                           ) -> WaterfillInstance:
    """Gains of fixed downlink beams through every receiver's estimated channel."""
    if len(beamformers) != len(ensemble):
        raise DimensionError(f"{len(beamformers)} beams for {len(ensemble)} devices")
    beams = [np.asarray(w, dtype=complex) for w in beamformers]
    J = len(beams)
    cross = np.empty((J, J))
    cee = np.empty((J, J))
    for j, ch in enumerate(ensemble.channels):
        for k, w in enumerate(beams):
            cross[j, k] = abs(np.vdot(w, ch.h_hat)) ** 2
            cee[j, k] = ch.cee_term(w)
    norms = np.array([float(np.real(np.vdot(w, w))) for w in beams])
    return WaterfillInstance(cross, cee, norms, ensemble.noise_power, budget,
                             None if taxation is None else np.asarray(taxation, dtype=float))
