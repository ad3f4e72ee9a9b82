"""Preplanned flat-ground walking: swing foot and pelvis trajectories.

One *cycle* is one step of period ``T_c``: an SSP of ``T_s`` during which
the swing foot travels a full stride (``2 * D_s``) followed by a DSP of
``T_d``.  Cycle ``k`` has its stance foot at ``x = k * D_s``; cycle 0
swings the left foot with the right foot standing at the world origin.

Pelvis coordinates inside a cycle are expressed relative to the stance
foot in x, relative to the feet midline (positive toward the stance foot)
in y, and absolute in z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import GaitParams, Pose3, Side, SupportPhase, TaskSpaceState
from .errors import OutOfDomainError
from .polynomial import BoundaryCondition as BC
from .polynomial import Coupling, Polynomial, solve_bvp, solve_coupled_bvp

FIRST_SWING = Side.LEFT


def plan_swing_foot(p: GaitParams) -> tuple[Polynomial, float, Polynomial]:
    """Swing foot x (quintic), lateral offset and z (sextic) over [0, T_s]."""
    return _swing(p)


@lru_cache(maxsize=64)
def _swing(p: GaitParams):
    ts, ds, hmax = p.ssp_period, p.step_length, p.max_foot_height
    x = solve_bvp([
        BC(0, 0.0, 0.0), BC(1, 0.0, 0.0), BC(2, 0.0, 0.0),
        BC(0, ts, 2 * ds), BC(1, ts, 0.0), BC(2, ts, 0.0),
    ], (0.0, ts))
    z = solve_bvp([
        BC(0, 0.0, 0.0), BC(1, 0.0, 0.0), BC(2, 0.0, 0.0),
        BC(0, ts / 2, hmax),
        BC(0, ts, 0.0), BC(1, ts, 0.0), BC(2, ts, 0.0),
    ], (0.0, ts))
    return x, p.foot_spacing, z


def pelvis_x_system(p: GaitParams):
    ts, tc = p.ssp_period, p.cycle_period
    segments = [(3, (0.0, ts)), (3, (ts, tc))]
    conditions = [
        (0, BC(0, 0.0, -p.pelvis_x_start)),
        (0, BC(0, ts, p.pelvis_x_end)),
        (1, BC(0, ts, p.pelvis_x_end)),
        (1, BC(0, tc, p.step_length - p.pelvis_x_start)),
    ]
    couplings = [
        Coupling(0, 1, 0.0, 1, 1, tc),
        Coupling(0, 2, 0.0, 1, 2, tc),
        Coupling(1, 1, ts, 0, 1, ts),
        Coupling(1, 2, ts, 0, 2, ts),
    ]
    return segments, conditions, couplings


def pelvis_y_system(p: GaitParams):
    """Lateral system.  ``as_printed`` imposes both DSP velocity couplings and
    the SSP end mirror condition; ``accel_continuous`` swaps that mirror
    condition for acceleration continuity into the DSP."""
    ts, tc = p.ssp_period, p.cycle_period
    yd, ym = p.pelvis_y_offset, p.pelvis_y_max
    segments = [(4, (0.0, ts)), (3, (ts, tc))]
    conditions = [
        (0, BC(0, 0.0, yd)),
        (0, BC(0, ts / 2, ym)),
        (0, BC(0, ts, yd)),
        (1, BC(0, ts, yd)),
        (1, BC(0, tc, -yd)),
    ]
    couplings = [
        Coupling(0, 1, 0.0, 1, 1, tc, sign=-1.0),
        Coupling(1, 1, ts, 0, 1, ts),
        Coupling(1, 1, tc, 0, 1, ts),
    ]
    if p.lateral_coupling == "as_printed":
        couplings.append(Coupling(0, 1, ts, 1, 1, tc, sign=-1.0))
    else:
        couplings.append(Coupling(1, 2, ts, 0, 2, ts))
    return segments, conditions, couplings


def pelvis_z_system(p: GaitParams):
    ts, tc, td = p.ssp_period, p.cycle_period, p.dsp_period
    mid_ssp, mid_dsp, next_mid = ts / 2, ts + td / 2, tc + ts / 2
    segments = [(3, (mid_ssp, mid_dsp)), (3, (mid_dsp, next_mid))]
    conditions = [
        (0, BC(0, mid_ssp, p.pelvis_z_max)),
        (0, BC(0, mid_dsp, p.pelvis_z_min)),
        (1, BC(0, mid_dsp, p.pelvis_z_min)),
        (1, BC(0, next_mid, p.pelvis_z_max)),
    ]
    couplings = [
        Coupling(0, 1, mid_ssp, 1, 1, next_mid),
        Coupling(0, 2, mid_ssp, 1, 2, next_mid),
        Coupling(1, 1, mid_dsp, 0, 1, mid_dsp),
        Coupling(1, 2, mid_dsp, 0, 2, mid_dsp),
    ]
    return segments, conditions, couplings


def plan_pelvis(p: GaitParams):
    """``(x_pieces, y_pieces, z_pieces)``, each a pair of polynomials."""
    return _pelvis(p)


@lru_cache(maxsize=64)
def _pelvis(p: GaitParams):
    x = tuple(solve_coupled_bvp(*pelvis_x_system(p)))
    y = tuple(solve_coupled_bvp(*pelvis_y_system(p)))
    z = tuple(solve_coupled_bvp(*pelvis_z_system(p)))
    return x, y, z


@dataclass(frozen=True)
class TaskSpacePlan:
    params: GaitParams
    swing_foot_x: Polynomial
    swing_foot_y: float
    swing_foot_z: Polynomial
    pelvis_x: tuple[Polynomial, Polynomial]
    pelvis_y: tuple[Polynomial, Polynomial]
    pelvis_z: tuple[Polynomial, Polynomial]
    cycle_index: int
    swing_side: Side

    @property
    def stance_side(self) -> Side:
        return self.swing_side.other

    @property
    def t_start(self) -> float:
        """Global time at which this cycle begins."""
        return self.cycle_index * self.params.cycle_period

    def _check(self, t: float):
        if not (-1e-9 <= t <= self.params.cycle_period + 1e-9):
            raise OutOfDomainError(f"t={t!r} outside cycle [0, {self.params.cycle_period}]")

    def swing_local(self, t: float, order: int = 0) -> tuple[float, float]:
        """Swing foot ``(x, z)`` (or derivative) relative to its lift-off point."""
        self._check(t)
        ts = self.params.ssp_period
        if t <= ts:
            return self.swing_foot_x(t, order), self.swing_foot_z(t, order)
        if order:
            return 0.0, 0.0
        return 2.0 * self.params.step_length, 0.0

    def pelvis_local(self, t: float, order: int = 0) -> tuple[float, float, float]:
        """Pelvis ``(x, y, z)`` in the cycle frame (see module docstring)."""
        self._check(t)
        p = self.params
        xs, xd = self.pelvis_x
        ys, yd = self.pelvis_y
        if t <= p.ssp_period:
            x, y = xs(t, order), ys(t, order)
        else:
            x, y = xd(t, order), yd(t, order)
        z1, z2 = self.pelvis_z
        if t < p.ssp_period / 2:
            z = z2(t + p.cycle_period, order)
        elif t <= z1.t_hi:
            z = z1(t, order)
        else:
            z = z2(t, order)
        return x, y, z

    # --- world placement --------------------------------------------------

    def stance_position(self) -> tuple[float, float]:
        """World (x, y) of this cycle's stance foot."""
        p = self.params
        y = 0.0 if self.stance_side is Side.RIGHT else p.foot_spacing
        return self.cycle_index * p.step_length, y

    @property
    def lateral_sign(self) -> float:
        """World-y direction of the stance foot seen from the midline."""
        return -1.0 if self.stance_side is Side.RIGHT else 1.0

    def swing_world(self, t: float, order: int = 0) -> tuple[float, float, float]:
        sx, sy = self.stance_position()
        x, z = self.swing_local(t, order)
        if order:
            return x, 0.0, z
        y = sy - self.lateral_sign * self.params.foot_spacing
        return sx - self.params.step_length + x, y, z

    def stance_world(self, order: int = 0) -> tuple[float, float, float]:
        if order:
            return 0.0, 0.0, 0.0
        sx, sy = self.stance_position()
        return sx, sy, 0.0

    def pelvis_world(self, t: float, order: int = 0) -> tuple[float, float, float]:
        x, y, z = self.pelvis_local(t, order)
        sgn = self.lateral_sign
        if order:
            return x, sgn * y, z
        sx, _ = self.stance_position()
        mid = self.params.foot_spacing / 2
        return sx + x, mid + sgn * y, z


def plan_cycle(p: GaitParams, cycle_index: int = 0) -> TaskSpacePlan:
    x, y_off, z = plan_swing_foot(p)
    px, py, pz = plan_pelvis(p)
    side = FIRST_SWING if cycle_index % 2 == 0 else FIRST_SWING.other
    return TaskSpacePlan(p, x, y_off, z, px, py, pz, cycle_index, side)


def sample_plan(plan: TaskSpacePlan, t: float) -> TaskSpaceState:
    """World-frame task-space state at local time ``t`` in ``[0, T_c]``.

    At ``t == T_s`` the state is already reported as DSP.
    """
    plan._check(t)
    p = plan.params
    swing = Pose3(*plan.swing_world(t))
    stance = Pose3(*plan.stance_world())
    pelvis = Pose3(*plan.pelvis_world(t))
    in_ssp = t < p.ssp_period
    phase = SupportPhase.SSP if in_ssp else SupportPhase.DSP
    if plan.swing_side is Side.LEFT:
        left, right = swing, stance
    else:
        left, right = stance, swing
    return TaskSpaceState(left, right, pelvis, plan.t_start + t, phase,
                          plan.swing_side if in_ssp else None)


def locate(p: GaitParams, t_global: float) -> tuple[int, float]:
    """Cycle index and local time for a global time."""
    k = int(math.floor(t_global / p.cycle_period + 1e-12))
    return k, max(0.0, t_global - k * p.cycle_period)


def sample_walk(p: GaitParams, t_global: float) -> TaskSpaceState:
    k, t = locate(p, t_global)
    return sample_plan(plan_cycle(p, k), t)


def sample_trajectory(p: GaitParams, n_cycles: int, rate_hz: float) -> dict[str, np.ndarray]:
    """Dense world-frame samples of the preplanned walk for plotting/export."""
    dt = 1.0 / rate_hz
    n = int(round(n_cycles * p.cycle_period / dt))
    cols = {k: np.empty(n + 1) for k in
            ("t", "left_x", "left_y", "left_z", "right_x", "right_y", "right_z",
             "pelvis_x", "pelvis_y", "pelvis_z")}
    for i in range(n + 1):
        t = i * dt
        k, tau = locate(p, t)
        if k >= n_cycles:
            k, tau = n_cycles - 1, p.cycle_period
        s = sample_plan(plan_cycle(p, k), tau)
        cols["t"][i] = t
        for name, pose in (("left", s.left_foot), ("right", s.right_foot), ("pelvis", s.pelvis)):
            cols[f"{name}_x"][i], cols[f"{name}_y"][i], cols[f"{name}_z"][i] = pose.position
    return cols
