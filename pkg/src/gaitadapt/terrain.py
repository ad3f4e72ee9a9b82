"""Piecewise-flat terrain and the four-corner sole contact switches."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import Pose3, RobotGeometry

FULL_WIDTH = (-math.inf, math.inf)


@dataclass(frozen=True)
class Segment:
    """Flat patch of height ``height`` over ``x_start <= x < x_end``.

    ``y_range`` limits the patch laterally; the default spans all y.
    """

    x_start: float
    x_end: float
    height: float
    y_range: tuple[float, float] = FULL_WIDTH

    def __post_init__(self):
        if not (math.isfinite(self.x_start) and math.isfinite(self.x_end) and self.x_end > self.x_start):
            raise ValueError(f"segment needs finite x_start < x_end, got {self.x_start}, {self.x_end}")
        if not math.isfinite(self.height):
            raise ValueError("segment height must be finite")
        if not self.y_range[1] > self.y_range[0]:
            raise ValueError(f"empty lateral range {self.y_range}")

    def covers(self, x: float, y: float) -> bool:
        return self.x_start <= x < self.x_end and self.y_range[0] <= y < self.y_range[1]


def _overlap(a: Segment, b: Segment) -> bool:
    return (a.x_start < b.x_end and b.x_start < a.x_end
            and a.y_range[0] < b.y_range[1] and b.y_range[0] < a.y_range[1])


@dataclass(frozen=True)
class Terrain:
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        segs = tuple(sorted(self.segments, key=lambda s: (s.x_start, s.y_range[0])))
        for i, a in enumerate(segs):
            for b in segs[i + 1:]:
                if _overlap(a, b):
                    raise ValueError(f"terrain segments overlap: {a} and {b}")
        object.__setattr__(self, "segments", segs)

    @classmethod
    def flat(cls) -> "Terrain":
        return cls()

    @classmethod
    def from_tuples(cls, rows) -> "Terrain":
        """Build from ``(x_start, x_end, height)`` or ``(..., y_min, y_max)`` rows."""
        segs = []
        for r in rows:
            if len(r) == 3:
                segs.append(Segment(*map(float, r)))
            else:
                segs.append(Segment(float(r[0]), float(r[1]), float(r[2]), (float(r[3]), float(r[4]))))
        return cls(tuple(segs))

    def height_at(self, x: float, y: float = 0.0) -> float:
        return height_at(self, x, y)


def height_at(terrain: Terrain, x: float, y: float = 0.0) -> float:
    """Ground height; segment ranges are closed on the left, open on the right."""
    for s in terrain.segments:
        if s.covers(x, y):
            return s.height
    return 0.0


@dataclass(frozen=True)
class SensorConfig:
    trigger_offset: float = 0.003  # delta_z [m]
    latency_ticks: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.trigger_offset) and self.trigger_offset >= 0):
            raise ValueError(f"trigger_offset must be >= 0, got {self.trigger_offset!r}")
        if self.latency_ticks not in (0, 1):
            raise ValueError("latency_ticks must be 0 or 1")


@dataclass(frozen=True)
class ContactSwitchReading:
    """Corner bits ordered front-left, rear-left, rear-right, front-right."""

    corners: tuple[bool, bool, bool, bool] = (False, False, False, False)

    @property
    def con_sw(self) -> bool:
        return any(self.corners)


NO_CONTACT = ContactSwitchReading()


def sole_corners(foot: Pose3, g: RobotGeometry) -> list[tuple[float, float]]:
    hl, hw = g.foot_length / 2, g.foot_width / 2
    c, s = math.cos(foot.yaw), math.sin(foot.yaw)
    return [(foot.x + c * dx - s * dy, foot.y + s * dx + c * dy)
            for dx, dy in ((hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw))]


def sample_switches(foot: Pose3, terrain: Terrain, cfg: SensorConfig, g: RobotGeometry) -> ContactSwitchReading:
    """Corner ``i`` fires once the sole is within ``delta_z`` of the ground under it."""
    trigger = foot.z - cfg.trigger_offset
    return ContactSwitchReading(tuple(trigger <= height_at(terrain, x, y) for x, y in sole_corners(foot, g)))
