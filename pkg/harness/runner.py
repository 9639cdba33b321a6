"""Seeded Monte Carlo runner: single trials, mobility trajectories and parameter sweeps."""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from association.matching import (blocking_pairs, build_preferences, gale_shapley,
                                  rate_matrix, sum_rate_of)
from association.overhead import overhead_slots
from association.search import exhaustive, greedy, random_assoc
from association.types import AssociationMatrix, RateMatrix
from linproc.rates import e2e_rate
from scenario.geometry import Topology, sample_topology
from scenario.mobility import DeviceGroup, MobilityParams
from utils.config import ALGORITHMS, ExperimentConfig
from utils.errors import ConfigError, InvariantViolation
from utils.logging import reset_correlation_id, set_correlation_id
from utils.rng import TrialStreams
from .pipeline import IntervalResult, LinkEvaluator
from .report import (AlgorithmResult, ComplexityRow, ComplexityTable, SweepRow, SweepTable,
                     TrajectoryReport, TrialReport)

logger = logging.getLogger(__name__)

ORDER_TOLERANCE = 1e-9


def _set_irs(value: float) -> Dict[str, Any]:
    count = int(value)
    return {"uplink_irs": count, "downlink_irs": count}


def _set_elements(value: float) -> Dict[str, Any]:
    side = math.isqrt(int(value))
    if side * side != int(value) or side < 1:
        raise ConfigError(f"element count must be a perfect square, got {value}")
    return {"irs_side": side}


def _set_area(value: float) -> Dict[str, Any]:
    if not value > 0:
        raise ConfigError(f"area must be positive, got {value}")
    side = math.sqrt(value)
    return {"area": [side, side]}


def _set_cee(value: float) -> Dict[str, Any]:
    return {"sigma2_g": float(value), "sigma2_G": float(value)}


# axis name -> flat config overrides for one axis value
SWEEP_AXES: Dict[str, Callable[[float], Dict[str, Any]]] = {
    "power_dbm": lambda v: {"power_dbm": float(v)},
    "antennas": lambda v: {"antennas": int(v)},
    "elements": _set_elements,
    "area": _set_area,
    "cee": _set_cee,
    "time_slot": lambda v: {"coherence_slots": int(v)},
    "frequency": lambda v: {"carrier_freq_ghz": float(v)},
    "irs": _set_irs,
}


def _run_trial_job(payload):
    config_dict, seed = payload
    return ExperimentRunner(ExperimentConfig.from_dict(config_dict)).run_trial(seed)


class ExperimentRunner:
    """Runs the per-interval pipeline and the association algorithms on it."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.evaluator = LinkEvaluator(config)
        self.logger = logging.getLogger(__name__)

    # -- association -------------------------------------------------------

    def _associate(self, algorithm: str, rates: RateMatrix, streams: TrialStreams) -> AssociationMatrix:
        if algorithm == "gs":
            return gale_shapley(build_preferences(rates), rates)
        if algorithm == "es":
            return exhaustive(rates, cap=self.config.run.es_cap)
        if algorithm == "greedy":
            return greedy(rates, streams.greedy)
        if algorithm == "random":
            return random_assoc(rates.L, rates.M, streams.random)
        raise ConfigError(f"unknown algorithm '{algorithm}'")

    def _algorithms(self, rates: RateMatrix) -> List[str]:
        algorithms = [a for a in ALGORITHMS if a in self.config.run.algorithms]
        if "es" in algorithms and max(rates.L, rates.M) > self.config.run.es_cap:
            self.logger.warning(f"Skipping exhaustive search: {max(rates.L, rates.M)} IRSs "
                                f"exceed the cap of {self.config.run.es_cap}")
            algorithms.remove("es")
        return algorithms

    def associate(self, rates: RateMatrix, streams: TrialStreams) -> List[AlgorithmResult]:
        T = self.config.run.coherence_slots
        results = []
        for algorithm in self._algorithms(rates):
            assoc = self._associate(algorithm, rates, streams)
            tau = overhead_slots(algorithm, rates.L, rates.M, T, proposals=assoc.evaluations)
            rate = sum_rate_of(assoc, rates)
            with_overhead = overhead_rate(assoc, rates, tau, T)
            results.append(AlgorithmResult(
                algorithm=algorithm,
                pairs=assoc.as_list(),
                tau=tau,
                evaluations=assoc.evaluations,
                rate=rate,
                rate_with_overhead=with_overhead,
                stable=not blocking_pairs(assoc, rates),
            ))
        check_ordering(results)
        return results

    # -- trials ------------------------------------------------------------

    def _report(self, seed: int, interval: int, topology: Topology, links: IntervalResult,
                results: List[AlgorithmResult], started: float) -> TrialReport:
        return TrialReport(
            seed=seed,
            interval=interval,
            topology=topology.to_record(),
            ul_sums=links.ul_sums.tolist(),
            dl_sums=links.dl_sums.tolist(),
            ul_realized_sums=links.ul_realized_sums.tolist(),
            ul_sinrs=[s.tolist() for s in links.ul_sinrs],
            dl_sinrs=[s.tolist() for s in links.dl_sinrs],
            powers=[a.p.tolist() for a in links.allocations],
            power_converged=[a.converged for a in links.allocations],
            power_iterations=[a.iterations for a in links.allocations],
            results=results,
            elapsed_s=time.perf_counter() - started,
        )

    def _interval(self, seed: int, interval: int, topology: Topology,
                  streams: TrialStreams) -> TrialReport:
        started = time.perf_counter()
        links = self.evaluator.evaluate(topology, streams.cee)
        for allocation in links.allocations:
            if not allocation.converged:
                self.logger.warning(f"Power allocation did not converge (seed {seed}, interval {interval})")
        rates = rate_matrix(links.ul_sums, links.dl_sums)
        results = self.associate(rates, streams)
        return self._report(seed, interval, topology, links, results, started)

    def _groups(self, topology: Topology):
        params = MobilityParams.from_config(self.config.mobility, topology.area)
        return DeviceGroup(topology.uplink_devices, params), DeviceGroup(topology.downlink_devices, params)

    @staticmethod
    def _step(topology: Topology, groups, rng: np.random.Generator) -> Topology:
        uplink, downlink = groups
        return topology.with_devices(uplink.step(rng), downlink.step(rng))

    def run_trial(self, seed: int) -> TrialReport:
        """One Monte Carlo trial, fully determined by the config and `seed`."""
        token = set_correlation_id(f"trial-{seed}")
        try:
            streams = TrialStreams(seed)
            topology = sample_topology(self.config.geometry, streams.topology)
            steps = self.config.mobility.steps
            if steps:
                groups = self._groups(topology)
                for _ in range(steps):
                    topology = self._step(topology, groups, streams.mobility)
            report = self._interval(seed, steps, topology, streams)
            self.logger.debug(f"Trial {seed} done in {report.elapsed_s:.3f}s")
            return report
        finally:
            reset_correlation_id(token)

    def run_trajectory(self, seed: int, steps: int) -> TrajectoryReport:
        """Re-run association every coherence interval while the devices move."""
        if steps < 0:
            raise ConfigError(f"steps must be non-negative, got {steps}")
        token = set_correlation_id(f"trajectory-{seed}")
        try:
            streams = TrialStreams(seed)
            topology = sample_topology(self.config.geometry, streams.topology)
            groups = self._groups(topology)
            intervals = [self._interval(seed, 0, topology, streams)]
            for step in range(1, steps + 1):
                topology = self._step(topology, groups, streams.mobility)
                intervals.append(self._interval(seed, step, topology, streams))
            self.logger.info(f"Trajectory of {steps} steps finished for seed {seed}")
            return TrajectoryReport(seed=seed, steps=steps, intervals=intervals)
        finally:
            reset_correlation_id(token)

    def run_trials(self, trials: int) -> List[TrialReport]:
        """Trials base_seed .. base_seed + trials - 1, in seed order."""
        seeds = [self.config.run.base_seed + t for t in range(trials)]
        workers = self.config.run.workers
        if workers > 1 and trials > 1:
            payload = self.config.to_dict()
            with ProcessPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(_run_trial_job, [(payload, s) for s in seeds]))
        return [self.run_trial(s) for s in seeds]

    # -- sweeps ------------------------------------------------------------

    def sweep(self, axis: str, values: Sequence[float], trials: Optional[int] = None) -> SweepTable:
        """Mean and standard error of each algorithm's sum rate along one axis."""
        if axis not in SWEEP_AXES:
            raise ConfigError(f"unknown sweep axis '{axis}', expected one of {sorted(SWEEP_AXES)}")
        values = [float(v) for v in values]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError(f"sweep values must be strictly increasing, got {values}")
        trials = trials or self.config.run.trials

        use_overhead = self.config.run.with_overhead or axis == "time_slot"
        scale = 1.0
        unit = "bit/s/Hz"
        token = set_correlation_id(f"sweep-{axis}")
        try:
            rows: List[SweepRow] = []
            for value in values:
                config = self.config.with_overrides(**SWEEP_AXES[axis](value))
                if axis == "frequency":
                    scale, unit = config.radio.bandwidth_hz, "bit/s"
                self.logger.info(f"Sweep {axis}={value:g}: {trials} trials")
                reports = ExperimentRunner(config).run_trials(trials)
                rows.extend(summarize(value, reports, use_overhead, scale))
            return SweepTable(axis=axis, unit=unit, values=values, rows=rows)
        finally:
            reset_correlation_id(token)

    def summarize_complexity(self, irs_counts: Sequence[int], trials: Optional[int] = None) -> ComplexityTable:
        """Mean exhaustive-search evaluations and deferred-acceptance proposals per IRS count.

        Rate matrices are drawn uniformly at random so the proposal count
        reflects genuine competition between URs.
        """
        trials = trials or self.config.run.trials
        rows = []
        for L in irs_counts:
            proposals, evaluations = [], []
            for t in range(trials):
                rng = np.random.default_rng([self.config.run.base_seed + t, L])
                rates = RateMatrix(rng.uniform(0.0, 1.0, size=(L, L)))
                proposals.append(gale_shapley(build_preferences(rates), rates).evaluations)
                if L <= self.config.run.es_cap:
                    evaluations.append(exhaustive(rates, cap=self.config.run.es_cap).evaluations)
            rows.append(ComplexityRow(
                irs=L,
                es_evaluations=float(np.mean(evaluations)) if evaluations else None,
                gs_proposals=float(np.mean(proposals)),
                trials=trials,
            ))
        return ComplexityTable(rows=rows, gs_exponent=fit_exponent(rows))


def summarize(value: float, reports: List[TrialReport], use_overhead: bool,
              scale: float = 1.0) -> List[SweepRow]:
    """Per-algorithm mean, standard error and mean tau over trials, in algorithm order."""
    rows = []
    for algorithm in ALGORITHMS:
        found = [r.result(algorithm) for r in reports]
        found = [r for r in found if r is not None]
        if not found:
            continue
        rates = np.array([(r.rate_with_overhead if use_overhead else r.rate) * scale for r in found])
        stderr = float(np.std(rates, ddof=1) / math.sqrt(rates.size)) if rates.size > 1 else 0.0
        rows.append(SweepRow(
            axis_value=value,
            algorithm=algorithm,
            mean_rate=float(np.mean(rates)),
            stderr=stderr,
            mean_tau=float(np.mean([r.tau for r in found])),
            trials=len(found),
        ))
    return rows


def fit_exponent(rows: Sequence[ComplexityRow]) -> Optional[float]:
    """Slope of log(proposals) against log(IRS count)."""
    points = [(r.irs, r.gs_proposals) for r in rows if r.irs > 1 and r.gs_proposals > 0]
    if len(points) < 2:
        return None
    x, y = np.log(np.array(points, dtype=float)).T
    return float(np.polyfit(x, y, 1)[0])


def check_ordering(results: Sequence[AlgorithmResult]) -> None:
    """Raise if ES < GS, GS < random or ES < greedy at zero overhead."""
    rate = {r.algorithm: r.rate for r in results}

    def at_least(a: str, b: str) -> None:
        if a in rate and b in rate:
            slack = ORDER_TOLERANCE * max(1.0, abs(rate[a]))
            if rate[a] < rate[b] - slack:
                raise InvariantViolation(f"{a} sum rate {rate[a]:.9g} below {b} {rate[b]:.9g}")

    at_least("es", "gs")
    at_least("gs", "random")
    at_least("es", "greedy")


def overhead_rate(assoc: AssociationMatrix, rates: RateMatrix, tau: int, coherence_slots: int) -> float:
    """Sum over pairs of (1 - tau/T) * min(UR sum, DR sum)."""
    if rates.ul_sums is None or rates.dl_sums is None:
        return (1.0 - tau / coherence_slots) * sum_rate_of(assoc, rates)
    return float(sum(e2e_rate(rates.ul_sums[l], rates.dl_sums[m], tau, coherence_slots)
                     for l, m in sorted(assoc.pairs.items())))
