"""Per-interval link evaluation: channels, combining, power allocation and sum rates."""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from channel.cee import CeeParams, inject_cee
from channel.irs import IrsLink, build_irs_link, cascade
from channel.thz import ThzParams
from linproc.mmse import (LinkEnsemble, downlink_sinr, mmse_beamformers,
                          mmse_receive_vectors, uplink_sinr)
from linproc.rates import sum_rate
from power.waterfill import PowerAllocation, instance_from_downlink, waterfill
from scenario.geometry import Point3D, Topology
from utils.config import ExperimentConfig

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class IntervalResult:
    """Sum rates of every UR and DR for one coherence interval."""
    ul_sums: np.ndarray
    dl_sums: np.ndarray
    ul_realized_sums: np.ndarray
    ul_sinrs: List[np.ndarray] = field(default_factory=list)
    dl_sinrs: List[np.ndarray] = field(default_factory=list)
    allocations: List[PowerAllocation] = field(default_factory=list)


class LinkEvaluator:
    """Turns a topology into per-IRS uplink and downlink sum rates."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.params = ThzParams.from_config(config.radio)
        self.cee = CeeParams.from_config(config.csi)
        self.noise = config.radio.noise_power_w
        self.power = config.radio.power_w
        self.logger = logging.getLogger(__name__)

    def _link(self, irs: Point3D, devices: List[Point3D], ap: Point3D) -> IrsLink:
        radio = self.config.radio
        return build_irs_link(
            irs, devices, ap, self.params,
            antennas=radio.antennas,
            irs_side=radio.irs_side,
            element_spacing_wl=radio.element_spacing_wl,
            antenna_spacing_wl=radio.antenna_spacing_wl,
        )

    def uplink(self, link: IrsLink, rng: np.random.Generator):
        """MMSE-combined uplink SINRs on the estimates, and the rate they realise on a drawn true channel."""
        channels = link.channels(self.cee)
        ensemble = LinkEnsemble(channels, np.full(len(channels), self.power), self.noise)
        decoders = mmse_receive_vectors(ensemble)
        sinrs = uplink_sinr(ensemble, decoders)

        G_true = inject_cee(link.G_hat, self.cee.sigma2_G, rng)
        true_channels = [cascade(G_true, link.phases, inject_cee(g, self.cee.sigma2_g, rng))
                         for g in link.g_hats]
        realized = uplink_sinr(LinkEnsemble(true_channels, ensemble.powers, self.noise), decoders)
        return sinrs, realized

    def downlink(self, link: IrsLink):
        """MMSE beams at an even power split, then water-filled powers."""
        channels = link.channels(self.cee)
        J = len(channels)
        ensemble = LinkEnsemble(channels, np.full(J, self.power / J), self.noise)
        beams = mmse_beamformers(ensemble)
        instance = instance_from_downlink(ensemble, beams, self.power, self.config.run.taxation)
        allocation = waterfill(instance, self.config.run.waterfill_eps,
                               self.config.run.waterfill_max_iters)
        sinrs = downlink_sinr(ensemble.with_powers(allocation.p), beams)
        return sinrs, allocation

    def evaluate(self, topology: Topology, cee_rng: np.random.Generator) -> IntervalResult:
        ul_sinrs, realized, dl_sinrs, allocations = [], [], [], []
        for irs in topology.uplink_irs:
            sinrs, true_sinrs = self.uplink(self._link(irs, topology.uplink_devices, topology.ap), cee_rng)
            ul_sinrs.append(sinrs)
            realized.append(sum_rate(true_sinrs))
        for irs in topology.downlink_irs:
            sinrs, allocation = self.downlink(self._link(irs, topology.downlink_devices, topology.ap))
            dl_sinrs.append(sinrs)
            allocations.append(allocation)

        result = IntervalResult(
            ul_sums=np.array([sum_rate(s) for s in ul_sinrs]),
            dl_sums=np.array([sum_rate(s) for s in dl_sinrs]),
            ul_realized_sums=np.array(realized),
            ul_sinrs=ul_sinrs,
            dl_sinrs=dl_sinrs,
            allocations=allocations,
        )
        self.logger.debug(f"UR sums {np.round(result.ul_sums, 6).tolist()}, "
                          f"DR sums {np.round(result.dl_sums, 6).tolist()}")
        return result
