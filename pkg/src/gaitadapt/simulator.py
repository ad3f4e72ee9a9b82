"""Fixed-timestep closed-loop driver: plan, sense, adapt, solve IK, log.

There is no physics engine.  Contact is resolved purely by the switch model
against the terrain, and the ZMP is evaluated after the run from the
commanded link motion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .adaptation import LandingEvent, OnlineAdapter, TickOutput, default_step_drop
from .balance import foot_corners, second_difference, support_polygon, zmp_arrays, zmp_margin
from .core import (
    GRAVITY,
    SINGULARITY_EPS,
    GaitParams,
    RobotGeometry,
    Side,
    validate_gait_params,
)
from .errors import EmptyTraceError, GaitAdaptError
from .kinematics import JOINT_NAMES, leg_link_coms, plan_to_joints
from .terrain import NO_CONTACT, SensorConfig, Terrain, height_at, sample_switches

_DIV_TOL = 1e-12


@dataclass(frozen=True)
class Scenario:
    gait: GaitParams = field(default_factory=GaitParams)
    geometry: RobotGeometry = field(default_factory=RobotGeometry)
    terrain: Terrain = field(default_factory=Terrain)
    sensor: SensorConfig = field(default_factory=SensorConfig)
    dt: float = 0.005
    n_cycles: int = 4
    h: float | None = None  # retard drop per tick; None means 0.1 * dt
    seed: int = 0  # recorded for provenance; the driver itself is deterministic

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        for name, period in (("ssp_period", self.gait.ssp_period), ("cycle_period", self.gait.cycle_period)):
            n = period / self.dt
            if abs(n - round(n)) > _DIV_TOL * max(1.0, n):
                raise ValueError(f"dt={self.dt} does not divide {name}={period}")
        if int(self.n_cycles) != self.n_cycles or self.n_cycles < 1:
            raise ValueError("n_cycles must be a positive integer")
        if self.h is not None and not (math.isfinite(self.h) and self.h > 0):
            raise ValueError("h must be positive")

    @property
    def step_drop(self) -> float:
        return default_step_drop(self.dt) if self.h is None else self.h

    @property
    def ticks_per_cycle(self) -> int:
        return int(round(self.gait.cycle_period / self.dt))

    @property
    def n_ticks(self) -> int:
        return self.n_cycles * self.ticks_per_cycle


@dataclass(frozen=True)
class ContactEvent:
    """A finished landing with the ground it ended on."""

    landing: LandingEvent
    terrain_height: float

    @property
    def height_error(self) -> float:
        return self.landing.rest_z - self.terrain_height


OFFSET_COLUMNS = ("dx_foot", "dz_foot", "dz_pelvis", "left_dx", "left_dz",
                  "right_dx", "right_dz", "pelvis_dz")
POSE_COLUMNS = tuple(f"{b}_{c}" for b in ("left", "right", "pelvis") for c in "xyz")
JOINT_COLUMNS = tuple(f"{s}_{j}" for s in ("left", "right") for j in JOINT_NAMES)


@dataclass
class SimTrace:
    """Per-tick columns plus the landing events of one run.

    Numeric columns are float arrays of equal length; ``phase`` and
    ``swing_side`` are lists of strings.
    """

    scenario: Scenario
    columns: dict[str, np.ndarray]
    phase: list[str]
    swing_side: list[str]
    events: list[ContactEvent]

    def __len__(self) -> int:
        return len(self.columns["t"])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def total_offsets(self) -> np.ndarray:
        """``(n, 5)`` applied task-space modifications per tick."""
        return np.column_stack([self.columns[c] for c in OFFSET_COLUMNS[3:]])


def _landing_terrain_height(terrain: Terrain, x: float, y: float, g: RobotGeometry) -> float:
    pts = foot_corners(x, y, 0.0, g) + [(x, y)]
    return max(height_at(terrain, px, py) for px, py in pts)


def run(scenario: Scenario) -> SimTrace:
    """Drive the online adaptation over the preplanned walk.

    Errors raised inside the loop carry a ``tick`` attribute with the index
    of the tick that failed.
    """
    sc = scenario
    g, terrain, cfg = sc.geometry, sc.terrain, sc.sensor
    validate_gait_params(sc.gait, g)
    adapter = OnlineAdapter(sc.gait, cfg.trigger_offset, sc.step_drop, refine_touch=cfg.latency_ticks == 0)
    n_total, n_per = sc.n_ticks, sc.ticks_per_cycle

    cols = {name: np.empty(n_total) for name in
            ("t", "cycle", *POSE_COLUMNS, *JOINT_COLUMNS, *OFFSET_COLUMNS,
             "con_sw_left", "con_sw_right", "swing_landed")}
    phase: list[str] = []
    swing_side: list[str] = []
    events: list[ContactEvent] = []
    supports = []

    def sense(pose):
        return sample_switches(pose, terrain, cfg, g)

    pending = {Side.LEFT: NO_CONTACT, Side.RIGHT: NO_CONTACT}
    for n in range(n_total):
        k, i = divmod(n, n_per)
        tau = i * sc.dt
        try:
            if i == 0:
                adapter.begin_cycle(k)
            provisional = adapter.command(tau)
            readings = {s: sense(provisional.foot(s)) for s in Side}
            swing = adapter.plan.swing_side
            seen = pending[swing] if cfg.latency_ticks else readings[swing]
            pending = readings
            out: TickOutput = adapter.step(tau, seen, sense)
            state = out.state
            left_j, right_j = plan_to_joints(state, g, SINGULARITY_EPS)
        except GaitAdaptError as exc:
            exc.tick = n
            raise

        cols["t"][n] = state.time
        cols["cycle"][n] = k
        for name, pose in (("left", state.left_foot), ("right", state.right_foot), ("pelvis", state.pelvis)):
            cols[f"{name}_x"][n], cols[f"{name}_y"][n], cols[f"{name}_z"][n] = pose.position
        for side, j in (("left", left_j), ("right", right_j)):
            for jn in JOINT_NAMES:
                cols[f"{side}_{jn}"][n] = getattr(j, jn)
        for c in OFFSET_COLUMNS:
            cols[c][n] = getattr(out, c)
        cols["con_sw_left"][n] = readings[Side.LEFT].con_sw
        cols["con_sw_right"][n] = readings[Side.RIGHT].con_sw
        cols["swing_landed"][n] = out.swing_landed
        phase.append(out.phase.value)
        swing_side.append(swing.value)
        feet = (swing.other, swing) if out.swing_landed else (swing.other,)
        supports.append(support_polygon(state, g, feet))
        if out.event is not None:
            foot = state.foot(swing)
            events.append(ContactEvent(out.event, _landing_terrain_height(terrain, foot.x, foot.y, g)))

    _attach_balance(cols, supports, g, sc.dt)
    return SimTrace(sc, cols, phase, swing_side, events)


def link_positions(cols: dict[str, np.ndarray], g: RobotGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Masses ``(10,)`` and world CoM positions ``(n, 10, 3)`` from logged joints.

    Pelvis and feet stay level in the gait, so link frames are pure
    translations of the pelvis frame.
    """
    from .kinematics import LegJoints

    n = len(cols["t"])
    masses = [g.pelvis_mass, g.upper_body_mass]
    pos = np.empty((n, 10, 3))
    pel = np.column_stack([cols["pelvis_x"], cols["pelvis_y"], cols["pelvis_z"]])
    pos[:, 0] = pel + np.asarray(g.pelvis_com)
    pos[:, 1] = pel + np.asarray(g.upper_body_com)
    for i in range(n):
        slot = 2
        for side in (Side.LEFT, Side.RIGHT):
            j = LegJoints(*(cols[f"{side.value}_{jn}"][i] for jn in JOINT_NAMES))
            for mass, p in leg_link_coms(j, g, side):
                if i == 0:
                    masses.append(mass)
                pos[i, slot] = pel[i] + p
                slot += 1
    if n == 0:
        masses += [m for _ in Side for m in (g.thigh_mass, g.shank_mass, g.ankle_mass, g.foot_mass)]
    return np.array(masses), pos


def _attach_balance(cols, supports, g: RobotGeometry, dt: float) -> None:
    masses, pos = link_positions(cols, g)
    acc = second_difference(pos, dt)
    zx, zy, mu = zmp_arrays(masses, pos, acc, GRAVITY)
    cols["zmp_x"], cols["zmp_y"], cols["mu_req"] = zx, zy, mu
    cols["zmp_margin"] = np.array([
        zmp_margin((x, y), poly) if math.isfinite(x) else math.nan
        for x, y, poly in zip(zx, zy, supports)])


# --- reporting -------------------------------------------------------------------

@dataclass(frozen=True)
class Report:
    n_ticks: int
    duration: float
    max_landing_speed: float
    max_touch_speed: float
    min_zmp_margin: float
    max_mu_req: float
    max_abs_offset_final_cycle: float
    steps: tuple[tuple, ...]      # (cycle, side, path, rest_z, terrain_z, error)
    timeline: tuple[tuple, ...]   # (t_start, cycle, phase)

    def to_text(self) -> str:
        lines = [
            f"ticks                      {self.n_ticks}",
            f"duration [s]               {self.duration:.6g}",
            f"max landing speed [m/s]    {self.max_landing_speed:.3e}",
            f"max touch speed [m/s]      {self.max_touch_speed:.3e}",
            f"min ZMP margin [m]         {self.min_zmp_margin:.6f}",
            f"max required friction      {self.max_mu_req:.6f}",
            f"max |offset| last cycle [m] {self.max_abs_offset_final_cycle:.3e}",
            "",
            "steps: cycle side path rest_z terrain_z error",
        ]
        for c, side, path, rest, ter, err in self.steps:
            lines.append(f"  {c:3d} {side:5s} {path:7s} {rest: .9f} {ter: .9f} {err: .3e}")
        lines += ["", "phase timeline: t_start cycle phase"]
        for t0, c, ph in self.timeline:
            lines.append(f"  {t0:9.4f} {c:3d} {ph}")
        return "\n".join(lines) + "\n"


def summarize(trace: SimTrace) -> Report:
    if len(trace) == 0:
        raise EmptyTraceError("trace has no rows")
    c = trace.columns
    landing = [e.landing.landing_speed for e in trace.events]
    touch = [e.landing.touch_speed for e in trace.events]
    margin = c["zmp_margin"]
    mu = c["mu_req"]
    last = c["cycle"] == c["cycle"][-1]
    steps = tuple((e.landing.cycle, e.landing.side.value, e.landing.path, e.landing.rest_z,
                   e.terrain_height, e.height_error) for e in trace.events)
    timeline = []
    for i, ph in enumerate(trace.phase):
        if i == 0 or ph != trace.phase[i - 1]:
            timeline.append((float(c["t"][i]), int(c["cycle"][i]), ph))
    finite = np.isfinite(margin)
    return Report(
        n_ticks=len(trace),
        duration=float(c["t"][-1] - c["t"][0]),
        max_landing_speed=max(landing, default=0.0),
        max_touch_speed=max(touch, default=0.0),
        min_zmp_margin=float(margin[finite].min()) if finite.any() else math.nan,
        max_mu_req=float(np.nanmax(mu)) if np.isfinite(mu).any() else math.nan,
        max_abs_offset_final_cycle=float(np.abs(trace.total_offsets()[last]).max()),
        steps=steps,
        timeline=tuple(timeline),
    )
