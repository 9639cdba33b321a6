"""Floor geometry: points, distances and topology sampling."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from utils.config import GeometryConfig
from utils.errors import GeometryError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Point3D:
    """A position in meters; z is height above the floor."""
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise GeometryError(f"non-finite coordinate in {self}")
        if self.z < 0:
            raise GeometryError(f"point below the floor: {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def as_list(self) -> List[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_seq(cls, values: Sequence[float]) -> "Point3D":
        x, y, z = values
        return cls(float(x), float(y), float(z))


def distance(a: Point3D, b: Point3D) -> float:
    """Euclidean distance in meters."""
    return math.dist((a.x, a.y, a.z), (b.x, b.y, b.z))


def as_array(points: Sequence[Point3D]) -> np.ndarray:
    """Stack points into an (n, 3) array."""
    return np.array([p.as_list() for p in points], dtype=float).reshape(len(points), 3)


@dataclass
class Topology:
    """Positions of every node for one coherence interval."""
    uplink_devices: List[Point3D]
    downlink_devices: List[Point3D]
    uplink_irs: List[Point3D]
    downlink_irs: List[Point3D]
    ap: Point3D
    area: Tuple[float, float] = field(default=(40.0, 40.0))

    def __post_init__(self):
        groups = {
            "uplink_devices": self.uplink_devices,
            "downlink_devices": self.downlink_devices,
            "uplink_irs": self.uplink_irs,
            "downlink_irs": self.downlink_irs,
        }
        for name, points in groups.items():
            if len(points) < 1:
                raise GeometryError(f"topology needs at least one entry in {name}")
        width, height = self.area
        for p in self.all_points():
            if not (0.0 <= p.x <= width and 0.0 <= p.y <= height):
                raise GeometryError(f"{p} lies outside the {width}x{height} m area")

    def all_points(self) -> List[Point3D]:
        return [*self.uplink_devices, *self.downlink_devices,
                *self.uplink_irs, *self.downlink_irs, self.ap]

    def with_devices(self, uplink: List[Point3D], downlink: List[Point3D]) -> "Topology":
        """Same IRSs and AP, moved devices."""
        return Topology(uplink, downlink, self.uplink_irs, self.downlink_irs, self.ap, self.area)

    def to_record(self) -> Dict[str, List[List[float]]]:
        """Serializable form used in trial reports."""
        return {
            "ud": [p.as_list() for p in self.uplink_devices],
            "dd": [p.as_list() for p in self.downlink_devices],
            "ur": [p.as_list() for p in self.uplink_irs],
            "dr": [p.as_list() for p in self.downlink_irs],
            "ap": [self.ap.as_list()],
        }

    @classmethod
    def from_record(cls, record: Dict[str, List[List[float]]], area: Tuple[float, float]) -> "Topology":
        def points(key):
            return [Point3D.from_seq(v) for v in record[key]]
        return cls(points("ud"), points("dd"), points("ur"), points("dr"),
                   Point3D.from_seq(record["ap"][0]), tuple(area))


def _uniform_points(rng: np.random.Generator, count: int, x_range: Tuple[float, float],
                    y_range: Tuple[float, float], z: float) -> List[Point3D]:
    xs = rng.uniform(x_range[0], x_range[1], size=count)
    ys = rng.uniform(y_range[0], y_range[1], size=count)
    return [Point3D(float(x), float(y), z) for x, y in zip(xs, ys)]


def sample_topology(geometry: GeometryConfig, rng: np.random.Generator) -> Topology:
    """Drop devices and IRSs uniformly over their floor regions.

    Regions are stored as fractions of the area, so the default 40 x 40 m
    floor gives uplink devices x in [0, 20] and downlink devices x in [20, 40].
    """
    width, height = (float(v) for v in geometry.area)
    if width <= 0 or height <= 0:
        raise GeometryError(f"area must be positive, got {width} x {height}")

    def scaled(fractions, length):
        return fractions[0] * length, fractions[1] * length

    y_span = scaled(geometry.y_range, height)
    ud = _uniform_points(rng, geometry.uplink_devices, scaled(geometry.ud_x, width), y_span,
                         geometry.device_height)
    dd = _uniform_points(rng, geometry.downlink_devices, scaled(geometry.dd_x, width), y_span,
                         geometry.device_height)
    ur = _uniform_points(rng, geometry.uplink_irs, scaled(geometry.ur_x, width), y_span,
                         geometry.irs_height)
    dr = _uniform_points(rng, geometry.downlink_irs, scaled(geometry.dr_x, width), y_span,
                         geometry.irs_height)
    ap = Point3D(geometry.ap_xy_fraction[0] * width, geometry.ap_xy_fraction[1] * height,
                 geometry.ap_height)

    logger.debug(f"Sampled topology: {len(ud)} UDs, {len(dd)} DDs, {len(ur)} URs, {len(dr)} DRs")
    return Topology(ud, dd, ur, dr, ap, (width, height))
