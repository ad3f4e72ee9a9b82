"""Online landing adaptation: advance landing, retard landing, hold, release.

Timetable of one cycle (local time ``tau`` in ``[0, T_c)``):

* ``[0, T_s/2)``: switches ignored.  If the stance foot was modified in the
  previous cycle, its offsets are being released over the whole SSP.
* ``[T_s/2, T_s]``: monitoring.  A touch here starts the advance path: the
  swing foot is frozen at its touch-down kinematics and a quintic ``z_mod``
  lowers it by ``delta_z`` while ``x_mod`` carries it forward by ``delta_x``.
* no touch by ``T_s``: retard path.  Foot and pelvis are lowered by ``h``
  every tick until the switches fire, then ``z_mod`` settles the foot.
* remaining DSP: offsets held.

World frame bookkeeping
-----------------------
Adaptation leaves the landed foot at a different place than planned.  The
preplanned cycle is therefore placed in the world relative to a reference
``ref(tau) = C - r(tau)``, where ``C`` accumulates the landed offsets and
``r`` is the stance offset still being released.  The stance foot sits at
``C`` + plan throughout, so it never moves, while pelvis and swing foot
glide onto the new reference as ``r`` decays to zero.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from .core import GaitParams, Pose3, Side, SupportPhase, TaskSpaceState
from .errors import DSPExhaustedError, OffsetAboveApexError
from .planner import TaskSpacePlan, plan_cycle
from .polynomial import Polynomial, quintic_transition
from .terrain import ContactSwitchReading

_BISECT_TOL = 1e-13
_TIME_EPS = 1e-9


class Phase(enum.Enum):
    IDLE = "Idle"
    MONITORING = "Monitoring"
    ADVANCE_MODIFYING = "AdvanceModifying"
    RETARD_SEARCHING = "RetardSearching"
    RETARD_MODIFYING = "RetardModifying"
    HOLDING_DSP = "HoldingDSP"
    RELEASING = "Releasing"


def default_step_drop(dt: float) -> float:
    """Retard descent per tick giving a stepped descent speed of 0.1 m/s."""
    return 0.1 * dt


# --- landing geometry ------------------------------------------------------------

def compute_t_mod(plan: TaskSpacePlan, delta_z: float) -> float:
    """Time the preplanned swing foot needs to descend the last ``delta_z``.

    ``T_mod = T_s - t*`` with ``t*`` the last time on ``[T_s/2, T_s]`` where the
    preplanned height equals ``delta_z``.
    """
    p = plan.params
    if delta_z >= p.max_foot_height:
        raise OffsetAboveApexError(
            f"trigger offset {delta_z} m is not below the swing apex {p.max_foot_height} m")
    if delta_z <= 0.0:
        return 0.0
    z = plan.swing_foot_z
    lo, hi = p.ssp_period / 2, p.ssp_period
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if z(mid) > delta_z:
            lo = mid
        else:
            hi = mid
    return p.ssp_period - hi


def compute_delta_x(plan: TaskSpacePlan, t_mod: float) -> float:
    """Preplanned forward travel of the swing foot over its last ``t_mod``."""
    ts = plan.params.ssp_period
    if t_mod <= 0.0:
        return 0.0
    return plan.swing_foot_x(ts) - plan.swing_foot_x(ts - t_mod)


@dataclass(frozen=True)
class TouchValues:
    """Commanded swing-foot kinematics at the touch instant (world frame)."""

    z: float
    z_dot: float = 0.0
    z_ddot: float = 0.0
    x: float = 0.0
    x_dot: float = 0.0
    x_ddot: float = 0.0


@dataclass(frozen=True)
class Profile:
    """Polynomial on ``[0, T]`` that holds its exact end value afterward."""

    poly: Polynomial | None
    end_value: float

    def __call__(self, t: float, order: int = 0) -> float:
        if self.poly is None or t >= self.poly.t_hi:
            return self.end_value if order == 0 else 0.0
        return self.poly(max(t, 0.0), order)


ZERO = Profile(None, 0.0)


def build_landing_mods(touch: TouchValues, delta_z: float, delta_x: float,
                       t_mod: float) -> tuple[Profile, Profile]:
    """``(z_mod, x_mod)`` quintics starting from the touch derivatives.

    ``z_mod`` goes from 0 to ``-delta_z`` and ``x_mod`` from 0 to ``+delta_x``
    over ``t_mod``, both ending at rest.  A zero ``t_mod`` gives step profiles.
    """
    if t_mod <= 0.0:
        return Profile(None, -delta_z), Profile(None, delta_x)
    z = quintic_transition(0.0, -delta_z, t_mod, touch.z_dot, touch.z_ddot)
    x = quintic_transition(0.0, delta_x, t_mod, touch.x_dot, touch.x_ddot)
    return Profile(z, -delta_z), Profile(x, delta_x)


def release_profile(delta: float, ssp_period: float) -> Profile:
    """Smooth return of a held offset to zero over one SSP."""
    if delta == 0.0:
        return ZERO
    return Profile(quintic_transition(delta, 0.0, ssp_period), 0.0)


# --- state ---------------------------------------------------------------------

@dataclass
class AdaptationState:
    phase: Phase = Phase.IDLE
    dz_foot: float = 0.0
    dx_foot: float = 0.0
    dz_pelvis: float = 0.0
    z_mod: Profile = ZERO
    x_mod: Profile = ZERO
    release: dict[str, Profile] = field(default_factory=dict)
    releasing: bool = False
    t_touch: float | None = None
    t_mod: float = 0.0
    touch: TouchValues | None = None
    delta_x: float = 0.0
    h: float = 0.0005
    path: str | None = None  # 'advance' or 'retard' once a path is taken

    @property
    def reported_phase(self) -> Phase:
        if self.phase is Phase.IDLE and self.releasing:
            return Phase.RELEASING
        return self.phase

    @property
    def modifying(self) -> bool:
        return self.phase in (Phase.ADVANCE_MODIFYING, Phase.RETARD_MODIFYING, Phase.HOLDING_DSP)


def advance_tick(state: AdaptationState, t: float, z_pre: float, x_pre: float) -> tuple[float, float]:
    """Advance-path command for the swing foot at cycle time ``t``.

    ``z_pre``/``x_pre`` are the preplanned (unmodified) positions at ``t``.
    The online offsets are recomputed every tick against the preplanned
    trajectory, which is the same as freezing the foot at its touch values
    and adding the landing profiles on top.

    Returns:
        Commanded ``(z, x)``.
    """
    tv = state.touch
    state.dz_foot = tv.z - z_pre
    state.dx_foot = tv.x - x_pre
    s = t - state.t_touch
    return (z_pre + state.z_mod(s) + state.dz_foot,
            x_pre + state.x_mod(s) + state.dx_foot)


def retard_tick(state: AdaptationState, t: float, con_sw: bool, z_pre: float,
                plan: TaskSpacePlan, delta_z: float) -> float:
    """Retard-path update; returns the commanded swing-foot z.

    While no switch fires the foot and pelvis drop by ``h`` each tick.  On
    the first firing tick a settling ``z_mod`` is built that starts at rest
    (the stepped descent has no meaningful instantaneous velocity).
    """
    if state.phase is Phase.RETARD_SEARCHING:
        if con_sw:
            state.touch = TouchValues(z_pre + state.dz_foot)
            state.t_touch = t
            t_mod = compute_t_mod(plan, delta_z)
            state.t_mod = max(0.0, min(t_mod, plan.params.cycle_period - t))
            state.z_mod, state.x_mod = build_landing_mods(state.touch, delta_z, 0.0, state.t_mod)
            state.phase = Phase.RETARD_MODIFYING
        else:
            state.dz_foot -= state.h
            state.dz_pelvis = state.dz_foot
    s = 0.0 if state.t_touch is None else t - state.t_touch
    return z_pre + state.dz_foot + state.z_mod(s)


def release_tick(state: AdaptationState, tau: float) -> dict[str, float]:
    """Remaining released offsets at time ``tau`` into the releasing SSP."""
    return {k: prof(tau) for k, prof in state.release.items()}


# --- closed-loop driver ------------------------------------------------------------

@dataclass(frozen=True)
class LandingEvent:
    """One completed landing of a swing foot.

    ``touch_time`` is when the switches fired; ``rest_time`` is when the
    commanded sole comes to rest.  ``landing_speed`` is the commanded vertical
    sole speed at ``rest_time``; ``touch_speed`` is the descent speed at the
    touch instant (the stepped speed ``h / dt`` on the retard path).
    """

    cycle: int
    side: Side
    path: str
    touch_time: float
    rest_time: float
    touch_z: float
    rest_z: float
    touch_speed: float
    landing_speed: float


@dataclass(frozen=True)
class TickOutput:
    state: TaskSpaceState
    phase: Phase
    releasing: bool
    dx_foot: float
    dz_foot: float
    dz_pelvis: float
    left_dx: float
    left_dz: float
    right_dx: float
    right_dz: float
    pelvis_dz: float
    swing_landed: bool
    event: LandingEvent | None = None

    @property
    def total_offsets(self) -> tuple[float, ...]:
        """Task-space modifications actually applied (feet and pelvis)."""
        return (self.left_dx, self.left_dz, self.right_dx, self.right_dz, self.pelvis_dz)


SenseFn = Callable[[Pose3], ContactSwitchReading]


class OnlineAdapter:
    """Single-owner state machine turning switch readings into commanded poses.

    Drive it with :meth:`begin_cycle` at the first tick of every cycle, then
    per tick :meth:`command` (provisional pose for sensing) followed by
    :meth:`step`.

    Args:
        params: Gait parameters of the preplanned walk.
        delta_z: Switch trigger offset.
        h: Retard descent per tick.
        refine_touch: Locate the advance touch instant between ticks by
            bisection on the switch predicate (needs a ``sense`` callback).
    """

    def __init__(self, params: GaitParams, delta_z: float, h: float, refine_touch: bool = True):
        self.params = params
        self.delta_z = float(delta_z)
        self.h = float(h)
        self.refine_touch = refine_touch
        self.state = AdaptationState(h=self.h)
        self.plan: TaskSpacePlan | None = None
        self.cx = 0.0
        self.cz = 0.0
        self._prev_tau = 0.0
        self._t_mod_nominal = None

    # frame -----------------------------------------------------------------

    def _ref(self, tau: float, order: int = 0) -> tuple[float, float]:
        rel = self.state.release
        rx = rel["stance_dx"](tau, order) if rel else 0.0
        rz = rel["stance_dz"](tau, order) if rel else 0.0
        if order:
            return -rx, -rz
        return self.cx - rx, self.cz - rz

    def _nominal_swing(self, tau: float, order: int = 0) -> tuple[float, float, float]:
        x, y, z = self.plan.swing_world(tau, order)
        rx, rz = self._ref(tau, order)
        return x + rx, y, z + rz

    def _swing_command(self, tau: float, order: int = 0) -> tuple[float, float]:
        """Commanded world swing ``(x, z)`` (or derivative) from the current state."""
        st = self.state
        x, _, z = self._nominal_swing(tau, order)
        if st.path == "advance":
            s = tau - st.t_touch
            if order == 0:
                return st.touch.x + st.x_mod(s), st.touch.z + st.z_mod(s)
            return st.x_mod(s, order), st.z_mod(s, order)
        if st.path == "retard":
            s = 0.0 if st.t_touch is None else tau - st.t_touch
            return x, z + (st.dz_foot if order == 0 else 0.0) + st.z_mod(s, order)
        return x, z

    # interface ---------------------------------------------------------------

    def begin_cycle(self, k: int) -> None:
        """Close the previous cycle and start cycle ``k``.

        Raises:
            DSPExhaustedError: if the previous swing foot never found ground.
        """
        st = self.state
        dx0 = dz0 = pel0 = 0.0
        if self.plan is not None:
            if st.phase is Phase.RETARD_SEARCHING:
                raise DSPExhaustedError(
                    f"cycle {self.plan.cycle_index}: no contact after descending "
                    f"{-st.dz_foot:.4f} m through the whole DSP")
            tc = self.params.cycle_period
            x_cmd, z_cmd = self._swing_command(tc)
            x_nom, _, z_nom = self._nominal_swing(tc)
            dx0, dz0, pel0 = x_cmd - x_nom, z_cmd - z_nom, st.dz_pelvis
            rx, rz = self._ref(tc)
            self.cx, self.cz = rx + dx0, rz + dz0
        ts = self.params.ssp_period
        release = {"stance_dx": release_profile(dx0, ts), "stance_dz": release_profile(dz0, ts),
                   "pelvis_dz": release_profile(pel0, ts)}
        self.state = AdaptationState(h=self.h, release=release,
                                     releasing=any(v != 0.0 for v in (dx0, dz0, pel0)))
        self.plan = plan_cycle(self.params, k)
        self._prev_tau = 0.0

    def command(self, tau: float) -> TaskSpaceState:
        """World task-space command at ``tau`` from the current state (no update)."""
        plan, st = self.plan, self.state
        ts = self.params.ssp_period
        sx, sz = self._swing_command(tau)
        _, sy, _ = plan.swing_world(tau)
        swing = Pose3(sx, sy, sz)
        stx, sty, stz = plan.stance_world()
        stance = Pose3(stx + self.cx, sty, stz + self.cz)
        px, py, pz = plan.pelvis_world(tau)
        rx, rz = self._ref(tau)
        pel_rel = st.release["pelvis_dz"](tau) if st.release else 0.0
        pelvis = Pose3(px + rx, py, pz + rz + pel_rel + st.dz_pelvis)
        left, right = (swing, stance) if plan.swing_side is Side.LEFT else (stance, swing)
        in_ssp = tau < ts - _TIME_EPS
        return TaskSpaceState(left, right, pelvis, plan.t_start + tau,
                              SupportPhase.SSP if in_ssp else SupportPhase.DSP,
                              plan.swing_side if in_ssp else None)

    def swing_pose(self, tau: float) -> Pose3:
        x, z = self._swing_command(tau)
        return Pose3(x, self.plan.swing_world(tau)[1], z)

    def step(self, tau: float, reading: ContactSwitchReading, sense: SenseFn | None = None) -> TickOutput:
        """Advance the state machine by one tick at cycle time ``tau``.

        ``reading`` is the swing-foot switch state sensed at the provisional
        command.  ``sense`` lets the advance path bisect the touch instant.
        """
        p, st, plan = self.params, self.state, self.plan
        ts, tc = p.ssp_period, p.cycle_period
        event = None

        if st.releasing and tau >= ts - _TIME_EPS:
            st.releasing = False
        if st.phase is Phase.IDLE and tau >= ts / 2 - _TIME_EPS:
            st.phase = Phase.MONITORING
        if st.phase is Phase.MONITORING:
            if reading.con_sw:
                self._start_advance(tau, sense)
            elif tau >= ts - _TIME_EPS:
                st.phase = Phase.RETARD_SEARCHING
                st.path = "retard"

        x_nom, _, z_nom = self._nominal_swing(tau)
        if st.path == "advance":
            advance_tick(st, tau, z_nom, x_nom)
        elif st.path == "retard":
            was_searching = st.phase is Phase.RETARD_SEARCHING
            retard_tick(st, tau, reading.con_sw, z_nom, plan, self.delta_z)
            if was_searching and st.phase is Phase.RETARD_MODIFYING:
                st.touch = TouchValues(st.touch.z, -self.h / self._dt_hint(tau), 0.0, x_nom, 0.0, 0.0)

        landed = False
        if st.t_touch is not None:
            rest_time = st.t_touch + st.t_mod
            landed = tau >= rest_time - _TIME_EPS
            if landed and st.phase in (Phase.ADVANCE_MODIFYING, Phase.RETARD_MODIFYING):
                st.phase = Phase.HOLDING_DSP
                event = self._landing_event(rest_time)

        self._prev_tau = tau
        out = self.command(tau)
        rel = st.release
        r_dx = rel["stance_dx"](tau) if rel else 0.0
        r_dz = rel["stance_dz"](tau) if rel else 0.0
        sx, sz = self._swing_command(tau)
        nx, _, nz = self._nominal_swing(tau)
        sw = (sx - nx, sz - nz)
        stn = (r_dx, r_dz)
        left, right = (sw, stn) if plan.swing_side is Side.LEFT else (stn, sw)
        pel_rel = rel["pelvis_dz"](tau) if rel else 0.0
        return TickOutput(out, st.reported_phase, st.releasing, st.dx_foot, st.dz_foot, st.dz_pelvis,
                          left[0], left[1], right[0], right[1], pel_rel + st.dz_pelvis, landed, event)

    # internals -------------------------------------------------------------------

    def _dt_hint(self, tau: float) -> float:
        dt = tau - self._prev_tau
        return dt if dt > 0 else 1.0

    def _start_advance(self, tau: float, sense: SenseFn | None) -> None:
        st, plan, p = self.state, self.plan, self.params
        ts, tc = p.ssp_period, p.cycle_period
        t_touch = tau
        if self.refine_touch and sense is not None:
            lo = max(self._prev_tau, ts / 2)
            if lo < tau and not sense(self.swing_pose(lo)).con_sw:
                hi = tau
                while hi - lo > _BISECT_TOL:
                    mid = 0.5 * (lo + hi)
                    if sense(self.swing_pose(mid)).con_sw:
                        hi = mid
                    else:
                        lo = mid
                t_touch = hi
            elif lo < tau:
                t_touch = lo
        x0, _, z0 = self._nominal_swing(t_touch)
        x1, _, z1 = self._nominal_swing(t_touch, 1)
        x2, _, z2 = self._nominal_swing(t_touch, 2)
        st.touch = TouchValues(z0, z1, z2, x0, x1, x2)
        st.t_touch = t_touch
        if self._t_mod_nominal is None:
            self._t_mod_nominal = compute_t_mod(plan, self.delta_z)
        st.t_mod = max(0.0, min(self._t_mod_nominal, tc - t_touch))
        st.delta_x = compute_delta_x(plan, st.t_mod)
        st.z_mod, st.x_mod = build_landing_mods(st.touch, self.delta_z, st.delta_x, st.t_mod)
        st.phase = Phase.ADVANCE_MODIFYING
        st.path = "advance"

    def _landing_event(self, rest_time: float) -> LandingEvent:
        st, plan = self.state, self.plan
        if st.z_mod.poly is not None:
            landing_speed = abs(st.z_mod.poly(st.t_mod, 1))
        else:
            landing_speed = abs(st.touch.z_dot)
        return LandingEvent(plan.cycle_index, plan.swing_side, st.path,
                            plan.t_start + st.t_touch, plan.t_start + rest_time,
                            st.touch.z, st.touch.z - self.delta_z,
                            abs(st.touch.z_dot), landing_speed)
