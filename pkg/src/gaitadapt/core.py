"""Shared value types: gait parameters, robot geometry, poses.

All quantities are SI (m, kg, s, rad).  The world frame has x forward,
y to the left and z up, with the origin at the initial stance-foot centre
on the ground.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace

from .errors import (
    InvalidGaitParamsError,
    InvalidTimingError,
    KinematicallyUnreachableError,
    NonPositiveParameterError,
)

GRAVITY = 9.80665
SINGULARITY_EPS = 1e-6  # [m] margin short of full knee extension


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    @property
    def sign(self) -> float:
        """+1 for the left leg, -1 for the right (lateral hip offset)."""
        return 1.0 if self is Side.LEFT else -1.0


class SupportPhase(enum.Enum):
    SSP = "SSP"
    DSP = "DSP"


LATERAL_COUPLINGS = ("as_printed", "accel_continuous")


@dataclass(frozen=True)
class GaitParams:
    """Parameters of one steady walking cycle (one step).

    The DSP period is derived, so it can never disagree with the SSP and
    cycle periods.  Pelvis lateral values are measured from the midline
    between the feet, positive toward the stance foot.
    """

    step_length: float = 0.2          # D_s
    ssp_period: float = 1.0           # T_s
    cycle_period: float = 1.8         # T_c
    max_foot_height: float = 0.05     # H_max
    foot_spacing: float = 0.23        # L_p
    pelvis_x_start: float = 0.07      # x_s
    pelvis_x_end: float = 0.03        # x_e
    pelvis_y_offset: float = 0.09     # y_d
    pelvis_y_max: float = 0.095       # y_m
    pelvis_z_max: float = 0.74
    pelvis_z_min: float = 0.72
    lateral_coupling: str = "as_printed"

    @property
    def dsp_period(self) -> float:
        return self.cycle_period - self.ssp_period

    def with_(self, **changes) -> "GaitParams":
        return replace(self, **changes)


def _mm(v: float) -> float:
    return v / 1000.0


def _g(v: float) -> float:
    return v / 1000.0


@dataclass(frozen=True)
class RobotGeometry:
    """Mass and length description of the lower body plus upper-body block.

    Defaults reproduce the robot table (grams and millimetres converted).
    Link CoM offsets are given in each link's local frame; ``None`` means
    the midpoint of the link's segment.
    """

    foot_mass: float = _g(3859)
    ankle_mass: float = _g(2236)
    shank_mass: float = _g(4561)
    thigh_mass: float = _g(6327)
    pelvis_mass: float = _g(17800)
    upper_body_mass: float = _g(28482)

    foot_length: float = _mm(265)
    foot_width: float = _mm(160)
    ankle_height: float = _mm(98)
    shank_length: float = _mm(360)
    thigh_length: float = _mm(360)
    hip_spacing: float = _mm(230)
    hip_to_pelvis: float = _mm(115)
    pelvis_to_head: float = _mm(767)

    foot_com: tuple[float, float, float] | None = None
    ankle_com: tuple[float, float, float] | None = None
    shank_com: tuple[float, float, float] | None = None
    thigh_com: tuple[float, float, float] | None = None
    pelvis_com: tuple[float, float, float] | None = None
    upper_body_com: tuple[float, float, float] | None = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.endswith("_com"):
                continue
            if not (math.isfinite(v) and v > 0):
                raise NonPositiveParameterError(f"{f.name} must be positive, got {v!r}")
        defaults = {
            "foot_com": (0.0, 0.0, -self.ankle_height / 2),
            "ankle_com": (0.0, 0.0, 0.0),
            "shank_com": (0.0, 0.0, -self.shank_length / 2),
            "thigh_com": (0.0, 0.0, -self.thigh_length / 2),
            "pelvis_com": (0.0, 0.0, 0.0),
            "upper_body_com": (0.0, 0.0, self.pelvis_to_head / 2),
        }
        for name, value in defaults.items():
            current = getattr(self, name)
            object.__setattr__(self, name, value if current is None else tuple(float(c) for c in current))

    @property
    def leg_mass(self) -> float:
        return self.foot_mass + self.ankle_mass + self.shank_mass + self.thigh_mass

    @property
    def total_mass(self) -> float:
        return 2 * self.leg_mass + self.pelvis_mass + self.upper_body_mass

    @property
    def leg_reach(self) -> float:
        """Hip-to-ankle distance with the knee straight."""
        return self.thigh_length + self.shank_length

    @property
    def leg_length(self) -> float:
        """Hip joint to sole with the leg straight."""
        return self.leg_reach + self.ankle_height


@dataclass(frozen=True)
class Pose3:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    @property
    def position(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def __post_init__(self):
        for v in (self.roll, self.pitch, self.yaw):
            if not math.isfinite(v):
                raise ValueError("orientation angles must be finite")


@dataclass(frozen=True)
class TaskSpaceState:
    left_foot: Pose3
    right_foot: Pose3
    pelvis: Pose3
    time: float
    phase: SupportPhase
    swing_side: Side | None = None

    def __post_init__(self):
        if (self.swing_side is None) != (self.phase is SupportPhase.DSP):
            raise ValueError("swing_side must be None exactly during DSP")

    def foot(self, side: Side) -> Pose3:
        return self.left_foot if side is Side.LEFT else self.right_foot


def validate_gait_params(p: GaitParams, g: RobotGeometry | None = None, samples_per_cycle: int = 64) -> None:
    """Raise if the gait parameters are inconsistent or not reachable.

    Reach is checked on the preplanned posture at every segment boundary
    and on a uniform grid over one cycle; the hip-to-ankle distance of both
    legs must stay at least :data:`SINGULARITY_EPS` short of thigh + shank.
    """
    g = g or RobotGeometry()
    values = {f.name: getattr(p, f.name) for f in fields(p) if f.name != "lateral_coupling"}
    for name, v in values.items():
        if not math.isfinite(v):
            raise InvalidGaitParamsError(f"{name} is not finite")
    if not (0 < p.ssp_period < p.cycle_period):
        raise InvalidTimingError(
            f"need 0 < ssp_period < cycle_period, got {p.ssp_period} and {p.cycle_period}")
    for name in ("max_foot_height", "foot_spacing", "pelvis_z_max", "pelvis_z_min"):
        if values[name] <= 0:
            raise NonPositiveParameterError(f"{name} must be positive, got {values[name]}")
    if p.step_length < 0:
        raise NonPositiveParameterError(f"step_length must be >= 0, got {p.step_length}")
    if p.pelvis_z_min > p.pelvis_z_max:
        raise InvalidGaitParamsError("pelvis_z_min exceeds pelvis_z_max")
    if p.pelvis_y_offset > p.pelvis_y_max:
        raise InvalidGaitParamsError("pelvis_y_offset exceeds pelvis_y_max")
    if p.lateral_coupling not in LATERAL_COUPLINGS:
        raise InvalidGaitParamsError(f"unknown lateral_coupling {p.lateral_coupling!r}")

    from .planner import plan_cycle, sample_plan  # planner depends on this module

    plan = plan_cycle(p, 0)
    ts = {0.0, p.ssp_period / 2, p.ssp_period, p.ssp_period + p.dsp_period / 2, p.cycle_period}
    ts.update(p.cycle_period * k / samples_per_cycle for k in range(samples_per_cycle + 1))
    limit = g.leg_reach - SINGULARITY_EPS
    for t in sorted(ts):
        state = sample_plan(plan, t)
        for side in Side:
            d = hip_to_ankle_distance(state, side, g)
            if d > limit:
                raise KinematicallyUnreachableError(
                    f"{side.value} leg needs hip-to-ankle {d:.4f} m at t={t:.3f} s "
                    f"(limit {limit:.4f} m)")


def hip_to_ankle_distance(state: TaskSpaceState, side: Side, g: RobotGeometry) -> float:
    """Distance from hip joint to ankle joint for a level pelvis and level foot."""
    foot = state.foot(side)
    pel = state.pelvis
    dx = foot.x - pel.x
    dy = foot.y - (pel.y + side.sign * g.hip_spacing / 2)
    dz = foot.z + g.ankle_height - pel.z
    return math.sqrt(dx * dx + dy * dy + dz * dz)


__all__ = [
    "GRAVITY", "SINGULARITY_EPS", "Side", "SupportPhase", "GaitParams", "RobotGeometry",
    "Pose3", "TaskSpaceState", "validate_gait_params", "hip_to_ankle_distance",
    "LATERAL_COUPLINGS",
]
