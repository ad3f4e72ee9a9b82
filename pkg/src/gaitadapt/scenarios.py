"""Ready-made scenarios: flat walking, a block or hole under one footfall."""
from __future__ import annotations

from .core import GaitParams, Side
from .planner import FIRST_SWING
from .simulator import Scenario
from .terrain import SensorConfig, Segment, Terrain

LANE_REACH = 0.5  # lateral extent of a lane patch beyond the foot centre [m]


def footfall(p: GaitParams, cycle: int) -> tuple[float, float, Side]:
    """Planned world (x, y) where the swing foot of ``cycle`` lands, and that foot."""
    side = FIRST_SWING if cycle % 2 == 0 else FIRST_SWING.other
    y = p.foot_spacing if side is Side.LEFT else 0.0
    return (cycle + 1) * p.step_length, y, side


def lane_patch(p: GaitParams, cycle: int, height: float, back: float, front: float) -> Segment:
    """Patch under one footfall restricted to that foot's lane (half of the y axis)."""
    x, y, side = footfall(p, cycle)
    mid = p.foot_spacing / 2
    y_range = (mid, y + LANE_REACH) if side is Side.LEFT else (y - LANE_REACH, mid)
    return Segment(round(x - back, 9), round(x + front, 9), height, y_range)


def flat(n_cycles: int = 4, **kw) -> Scenario:
    return Scenario(n_cycles=n_cycles, **kw)


def block(height: float, cycle: int = 2, n_cycles: int = 6, gait: GaitParams | None = None,
          delta_z: float = 0.003, **kw) -> Scenario:
    """Raised block under the landing of ``cycle``.

    The block extends further behind the planned footfall than ahead of it,
    because an early touch makes the foot land short.
    """
    gait = gait or GaitParams()
    seg = lane_patch(gait, cycle, height, back=0.18, front=0.14)
    return Scenario(gait=gait, terrain=Terrain((seg,)), sensor=SensorConfig(delta_z),
                    n_cycles=n_cycles, **kw)


def hole(depth: float, cycle: int = 2, n_cycles: int = 6, gait: GaitParams | None = None,
         delta_z: float = 0.003, **kw) -> Scenario:
    """Hole of ``depth`` under the landing of ``cycle``.

    It reaches further forward so the toe clears the far rim when the foot
    climbs out.
    """
    gait = gait or GaitParams()
    seg = lane_patch(gait, cycle, -depth, back=0.18, front=0.26)
    return Scenario(gait=gait, terrain=Terrain((seg,)), sensor=SensorConfig(delta_z),
                    n_cycles=n_cycles, **kw)
