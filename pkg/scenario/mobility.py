"""Device mobility: random-waypoint group heads and reference-point group members.

One step is one coherence interval. IRSs and the AP never move.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from utils.config import MobilityConfig
from .geometry import Point3D

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MobilityParams:
    """Speeds in meters per slot; alpha_a and alpha_s bound the member deviation draws."""
    v_min: float
    v_max: float
    pause_slots: int
    alpha_a: float
    alpha_s: float
    area: Tuple[float, float]
    slot: float = 1.0

    def __post_init__(self):
        if not 0 <= self.v_min <= self.v_max:
            raise ValueError(f"need 0 <= v_min <= v_max, got {self.v_min}, {self.v_max}")
        if self.pause_slots < 0:
            raise ValueError(f"pause_slots must be non-negative, got {self.pause_slots}")
        if not (abs(self.alpha_a) < 1 and abs(self.alpha_s) < 1):
            raise ValueError("deviation factors must lie in (-1, 1)")

    @classmethod
    def from_config(cls, config: MobilityConfig, area: Tuple[float, float]) -> "MobilityParams":
        return cls(config.v_min, config.v_max, config.pause_slots,
                   config.alpha_max, config.alpha_max, (float(area[0]), float(area[1])))


@dataclass(frozen=True)
class HeadState:
    position: Point3D
    velocity: float
    direction: float
    slots_until_repick: int


def normalize_angle(angle: float) -> float:
    """Map an angle to [0, 2*pi)."""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0:
        wrapped += TWO_PI
    # fmod can return 2*pi - tiny, which rounds to 2*pi on the add above
    return 0.0 if wrapped >= TWO_PI else wrapped


def _fold(coord: float, limit: float) -> Tuple[float, bool]:
    """Reflect a coordinate back into [0, limit]; report whether the heading flips."""
    if 0.0 <= coord <= limit:
        return coord, False
    period = math.floor(coord / limit)
    rest = coord - period * limit
    if period % 2 == 0:
        return rest, False
    return limit - rest, True


def _advance(position: Point3D, velocity: float, direction: float, params: MobilityParams
             ) -> Tuple[Point3D, float]:
    """Move one slot along `direction`, bouncing specularly off the area edges."""
    width, height = params.area
    step = velocity * params.slot
    x, flip_x = _fold(position.x + step * math.cos(direction), width)
    y, flip_y = _fold(position.y + step * math.sin(direction), height)
    if flip_x:
        direction = math.pi - direction
    if flip_y:
        direction = -direction
    return Point3D(x, y, position.z), normalize_angle(direction)


def step_head_rwm(state: HeadState, params: MobilityParams, rng: np.random.Generator) -> HeadState:
    """Advance a random-waypoint group head by one slot.

    Velocity and direction are redrawn only when the pause counter has run
    out; a heading is then held for max(pause_slots, 1) slots.
    """
    velocity, direction, counter = state.velocity, state.direction, state.slots_until_repick
    if counter <= 0:
        velocity = float(rng.uniform(params.v_min, params.v_max))
        direction = float(rng.uniform(0.0, TWO_PI))
        counter = params.pause_slots
    position, direction = _advance(state.position, velocity, direction, params)
    return HeadState(position, velocity, direction, max(counter - 1, 0))


def member_motion(head: HeadState, params: MobilityParams, alpha_a: float, alpha_s: float
                  ) -> Tuple[float, float]:
    """Member speed |v_h| + alpha_s * v_max (floored at 0) and heading phi_h + alpha_a * v_max."""
    velocity = max(0.0, abs(head.velocity) + alpha_s * params.v_max)
    direction = normalize_angle(head.direction + alpha_a * params.v_max)
    return velocity, direction


def step_members_rpgm(head: HeadState, member: Point3D, params: MobilityParams,
                      rng: np.random.Generator, alpha_a: Optional[float] = None,
                      alpha_s: Optional[float] = None) -> Point3D:
    """Advance one group member following the (already stepped) head.

    Deviation factors are drawn per call from (-alpha, alpha) using the
    bounds in `params` unless given explicitly.
    """
    if alpha_a is None:
        alpha_a = float(rng.uniform(-params.alpha_a, params.alpha_a))
    if alpha_s is None:
        alpha_s = float(rng.uniform(-params.alpha_s, params.alpha_s))
    velocity, direction = member_motion(head, params, alpha_a, alpha_s)
    position, _ = _advance(member, velocity, direction, params)
    return position


class DeviceGroup:
    """A head (the first device) and the members that follow it."""

    def __init__(self, positions: List[Point3D], params: MobilityParams):
        if not positions:
            raise ValueError("a device group needs at least one device")
        self.params = params
        self.head = HeadState(positions[0], params.v_min, 0.0, 0)
        self.members = list(positions[1:])

    @property
    def positions(self) -> List[Point3D]:
        return [self.head.position, *self.members]

    def step(self, rng: np.random.Generator) -> List[Point3D]:
        self.head = step_head_rwm(self.head, self.params, rng)
        self.members = [step_members_rpgm(self.head, m, self.params, rng) for m in self.members]
        return self.positions
