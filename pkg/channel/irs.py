"""IRS element geometry, phase configuration and cascaded channels."""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np

from scenario.geometry import Point3D, as_array, distance
from utils.errors import DimensionError
from .cee import CeeParams, mean_power
from .thz import ThzParams, segment_channel, segment_pathloss

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class PhaseConfig:
    """Per-element reflection amplitude in [0, 1] and phase in [0, 2*pi)."""
    amplitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float).ravel()
        self.phases = np.mod(np.asarray(self.phases, dtype=float).ravel(), 2.0 * math.pi)
        if self.amplitudes.shape != self.phases.shape:
            raise DimensionError(
                f"{self.amplitudes.size} amplitudes for {self.phases.size} phases")
        if np.any(self.amplitudes < 0) or np.any(self.amplitudes > 1):
            raise ValueError("reflection amplitudes must lie in [0, 1]")

    def __len__(self) -> int:
        return self.phases.size

    @property
    def coefficients(self) -> np.ndarray:
        """Diagonal of the reflection matrix, kappa * exp(j * theta)."""
        return self.amplitudes * np.exp(1j * self.phases)

    @classmethod
    def uniform(cls, phases: np.ndarray) -> "PhaseConfig":
        phases = np.asarray(phases, dtype=float)
        return cls(np.ones(phases.size), phases)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "PhaseConfig":
        return cls.uniform(rng.uniform(0.0, 2.0 * math.pi, size=n))


def optimal_phase_config(d_in: np.ndarray, d_out: np.ndarray, wavenumber: float) -> PhaseConfig:
    """Full-amplitude phases theta_n = omega * (d_in_n + d_out_n) that co-phase every element."""
    d_in = np.asarray(d_in, dtype=float).ravel()
    d_out = np.asarray(d_out, dtype=float).ravel()
    if d_in.shape != d_out.shape:
        raise DimensionError(f"distance vectors differ in length: {d_in.size} vs {d_out.size}")
    return PhaseConfig.uniform(wavenumber * (d_in + d_out))


def _centered_offsets(count: int, spacing: float) -> np.ndarray:
    return (np.arange(count) - (count - 1) / 2.0) * spacing


def element_grid(center: Point3D, side: int, spacing: float) -> np.ndarray:
    """(side**2, 3) element positions on a vertical square facing along x."""
    if side < 1:
        raise ValueError(f"IRS side must be at least 1, got {side}")
    offsets = _centered_offsets(side, spacing)
    ys, zs = np.meshgrid(center.y + offsets, center.z + offsets, indexing="ij")
    xs = np.full(ys.size, center.x)
    return np.column_stack([xs, ys.ravel(), zs.ravel()])


def antenna_array(center: Point3D, antennas: int, spacing: float) -> np.ndarray:
    """(K, 3) uniform linear array along x centred on the AP."""
    if antennas < 1:
        raise ValueError(f"need at least one antenna, got {antennas}")
    xs = center.x + _centered_offsets(antennas, spacing)
    return np.column_stack([xs, np.full(antennas, center.y), np.full(antennas, center.z)])


@dataclass(eq=False)
class CascadedChannel:
    """Estimated effective channel of one device through one IRS.

    `sigma2_g` and `sigma2_G` are absolute per-entry error variances of the
    device hop and the AP hop.
    """
    h_hat: np.ndarray
    G_hat: np.ndarray
    g_hat: np.ndarray
    sigma2_g: float = 0.0
    sigma2_G: float = 0.0
    gram: Optional[np.ndarray] = None  # G G^H, shared by the devices of one IRS

    @property
    def antennas(self) -> int:
        return self.h_hat.size

    @property
    def g_norm2(self) -> float:
        return float(np.real(np.vdot(self.g_hat, self.g_hat)))

    @cached_property
    def err_cov(self) -> np.ndarray:
        """sigma2_g * G G^H + sigma2_G * ||g||^2 * I."""
        gram = self.gram if self.gram is not None else self.G_hat @ self.G_hat.conj().T
        cov = self.sigma2_g * gram
        cov = cov + self.sigma2_G * self.g_norm2 * np.eye(self.antennas)
        return 0.5 * (cov + cov.conj().T)

    @property
    def cross_variance(self) -> float:
        return self.sigma2_g * self.sigma2_G

    @cached_property
    def effective_cov(self) -> np.ndarray:
        """Error covariance plus the product-of-errors term, as seen by a linear filter."""
        return self.err_cov + self.cross_variance * np.eye(self.antennas)

    def cee_term(self, u: np.ndarray) -> float:
        """Error power leaked through direction u, per unit transmit power."""
        u = np.asarray(u, dtype=complex)
        u_norm2 = float(np.real(np.vdot(u, u)))
        leak = (self.cross_variance + self.sigma2_G * self.g_norm2) * u_norm2
        if self.sigma2_g > 0:
            projected = self.G_hat.conj().T @ u
            leak += self.sigma2_g * float(np.real(np.vdot(projected, projected)))
        return float(leak)


def cascade(G_hat: np.ndarray, phases: PhaseConfig, g_hat: np.ndarray,
            cee: Optional[CeeParams] = None, gram: Optional[np.ndarray] = None) -> CascadedChannel:
    """h = G diag(kappa * exp(j theta)) g with the matching error statistics.

    The relative CEE variances are scaled by the mean per-entry power of the
    estimated hop they perturb.
    """
    G_hat = np.atleast_2d(np.asarray(G_hat, dtype=complex))
    g_hat = np.asarray(g_hat, dtype=complex).ravel()
    if G_hat.ndim != 2 or G_hat.shape[1] != g_hat.size or len(phases) != g_hat.size:
        raise DimensionError(
            f"cascade needs K x N, N, N; got {G_hat.shape}, {len(phases)}, {g_hat.size}")
    cee = cee or CeeParams()
    h_hat = G_hat @ (phases.coefficients * g_hat)
    return CascadedChannel(
        h_hat=h_hat,
        G_hat=G_hat,
        g_hat=g_hat,
        sigma2_g=cee.sigma2_g * mean_power(g_hat),
        sigma2_G=cee.sigma2_G * mean_power(G_hat),
        gram=gram,
    )


@dataclass(eq=False)
class IrsLink:
    """Estimated hops of one IRS: G (K x N) toward the AP and one g (N) per device."""
    irs: Point3D
    G_hat: np.ndarray
    g_hats: np.ndarray
    phases: PhaseConfig

    def channels(self, cee: Optional[CeeParams] = None) -> List[CascadedChannel]:
        gram = self.G_hat @ self.G_hat.conj().T
        return [cascade(self.G_hat, self.phases, g, cee, gram) for g in self.g_hats]


def centroid(points: Sequence[Point3D]) -> Point3D:
    x, y, z = as_array(points).mean(axis=0)
    return Point3D(float(x), float(y), float(z))


def build_irs_link(irs: Point3D, devices: Sequence[Point3D], ap: Point3D, params: ThzParams,
                   antennas: int, irs_side: int, element_spacing_wl: float = 0.5,
                   antenna_spacing_wl: float = 0.5,
                   phase_reference: Optional[Point3D] = None) -> IrsLink:
    """Geometry-driven estimated channels for one IRS and the devices it serves.

    Amplitudes come from IRS-centre distances; phases from per-element
    distances. The IRS co-phases toward `phase_reference` (default: the
    devices' centroid) and the middle AP antenna. The same link serves
    both directions: the device hop carries G_dev * G_elem_in and the AP hop
    G_elem_out * G_AP.
    """
    lam = params.wavelength
    g_ap, g_in, g_out, g_dev = params.gains
    elements = element_grid(irs, irs_side, element_spacing_wl * lam)
    ap_array = antenna_array(ap, antennas, antenna_spacing_wl * lam)
    device_xyz = as_array(devices)

    ap_loss = segment_pathloss(distance(irs, ap), g_out, g_ap, params)
    device_loss = segment_pathloss(np.array([distance(irs, d) for d in devices]), g_dev, g_in, params)

    d_ap = np.linalg.norm(ap_array[:, None, :] - elements[None, :, :], axis=2)
    d_dev = np.linalg.norm(device_xyz[:, None, :] - elements[None, :, :], axis=2)
    G_hat = segment_channel(d_ap, ap_loss, params.wavenumber)
    g_hats = segment_channel(d_dev, np.asarray(device_loss)[:, None], params.wavenumber)

    reference = phase_reference if phase_reference is not None else centroid(devices)
    d_ref = np.linalg.norm(elements - reference.as_array(), axis=1)
    phases = optimal_phase_config(d_ref, d_ap[antennas // 2], params.wavenumber)

    logger.debug(f"IRS link at ({irs.x:.2f}, {irs.y:.2f}): {len(devices)} devices, "
                 f"{elements.shape[0]} elements, {antennas} antennas")
    return IrsLink(irs=irs, G_hat=G_hat, g_hats=g_hats, phases=phases)
