"""One-dimensional corridor world and the two sensor front-ends that sample it."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from smartcane.errors import DomainError
from smartcane.signal_chain import (
    CalibrationTable,
    SensorSpec,
    analog_from_range,
    measured_mv,
)

IDEAL = "ideal"
REALISTIC = "realistic"
SENSING_MODES = (IDEAL, REALISTIC)


@dataclass(frozen=True)
class Obstacle:
    """A reflector at ``pos_in``, present for ticks in ``[appear_tick, vanish_tick)``."""

    pos_in: float
    appear_tick: int = 0
    vanish_tick: Optional[int] = None

    def __post_init__(self):
        if self.pos_in < 0:
            raise DomainError(f"obstacle position must be non-negative, got {self.pos_in}")
        if self.vanish_tick is not None and self.vanish_tick < self.appear_tick:
            raise DomainError("obstacle vanishes before it appears")

    def active(self, tick: int) -> bool:
        if tick < self.appear_tick:
            return False
        return self.vanish_tick is None or tick < self.vanish_tick


@dataclass(frozen=True)
class WaterPatch:
    from_in: float
    to_in: float
    depth_cm: float

    def __post_init__(self):
        if not self.from_in < self.to_in:
            raise DomainError(f"water patch needs from < to, got {self.from_in} >= {self.to_in}")
        if self.depth_cm < 0:
            raise DomainError(f"water depth must be non-negative, got {self.depth_cm}")

    def covers(self, pos_in: float) -> bool:
        return self.from_in <= pos_in <= self.to_in


@dataclass(frozen=True)
class World:
    obstacles: tuple[Obstacle, ...] = ()
    water: tuple[WaterPatch, ...] = ()
    corridor_len_in: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(self, "water", tuple(self.water))
        if not self.corridor_len_in > 0:
            raise DomainError("corridor length must be positive")
        for ob in self.obstacles:
            if ob.pos_in > self.corridor_len_in:
                raise DomainError(f"obstacle at {ob.pos_in} lies beyond the corridor end")
        for patch in self.water:
            if patch.to_in > self.corridor_len_in:
                raise DomainError(f"water patch ending at {patch.to_in} lies beyond the corridor end")


@dataclass(frozen=True)
class WalkerState:
    pos_in: float = 0.0
    speed_in_per_tick: float = 0.0

    def __post_init__(self):
        if self.pos_in < 0:
            raise DomainError(f"walker position must be non-negative, got {self.pos_in}")


def nearest_obstacle_distance(
    world: World, walker: WalkerState, tick: int, max_range_in: float
) -> Optional[float]:
    """Distance to the closest active obstacle strictly ahead, or ``None``.

    Obstacles farther than ``max_range_in`` return no echo.
    """
    best = None
    for ob in world.obstacles:
        if not ob.active(tick):
            continue
        d = ob.pos_in - walker.pos_in
        if d <= 0:
            continue
        if best is None or d < best:
            best = d
    if best is None or best > max_range_in:
        return None
    return best


def _realistic_mv(distance_in: float, spec: SensorSpec, table: CalibrationTable) -> float:
    if distance_in <= table.max_range_in:
        return measured_mv(distance_in, table)
    # past the last anchor, continue along the final segment's slope
    last, prev = table.rows[-1], table.rows[-2]
    slope = (last.measured_mv - prev.measured_mv) / (last.range_in - prev.range_in)
    return last.measured_mv + slope * (distance_in - last.range_in)


def sense_ultrasonic(
    world: World,
    walker: WalkerState,
    tick: int,
    spec: SensorSpec,
    table: CalibrationTable,
    mode: str = REALISTIC,
) -> tuple[Optional[float], float]:
    """Sample the ranger: ``(distance_in or None, output_mv)``.

    ``mode`` is ``"realistic"`` (voltage follows the measured calibration
    column) or ``"ideal"`` (exact transfer slope). No echo reads 0 mV.
    """
    if mode not in SENSING_MODES:
        raise DomainError(f"unknown sensing mode {mode!r}")
    distance = nearest_obstacle_distance(world, walker, tick, spec.max_range_in)
    if distance is None:
        return None, 0.0
    if mode == IDEAL:
        return distance, analog_from_range(distance, spec)
    return distance, _realistic_mv(distance, spec, table)


def water_depth_at(world: World, walker: WalkerState) -> float:
    """Depth under the walker; the deepest patch wins where patches overlap."""
    depth = 0.0
    for patch in world.water:
        if patch.covers(walker.pos_in) and patch.depth_cm > depth:
            depth = patch.depth_cm
    return depth


def advance_walker(
    walker: WalkerState, ticks: int, corridor_len_in: float = math.inf
) -> WalkerState:
    if ticks < 0:
        raise DomainError(f"cannot advance by a negative tick count ({ticks})")
    pos = walker.pos_in + walker.speed_in_per_tick * ticks
    pos = min(max(pos, 0.0), corridor_len_in)
    return replace(walker, pos_in=pos)
