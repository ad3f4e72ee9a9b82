"""Biped walking on uneven ground: preplanned gait plus online landing adaptation."""
from .adaptation import (
    AdaptationState,
    LandingEvent,
    OnlineAdapter,
    Phase,
    TouchValues,
    advance_tick,
    build_landing_mods,
    compute_delta_x,
    compute_t_mod,
    release_tick,
    retard_tick,
)
from .balance import (
    LinkState,
    SupportPolygon,
    compute_zmp,
    convex_hull,
    required_friction,
    support_polygon,
    zmp_margin,
)
from .config import load_scenario, parse_scenario
from .core import (
    GRAVITY,
    GaitParams,
    Pose3,
    RobotGeometry,
    Side,
    SupportPhase,
    TaskSpaceState,
    validate_gait_params,
)
from .errors import (
    DSPExhaustedError,
    GaitAdaptError,
    InvalidGaitParamsError,
    KinematicallyUnreachableError,
    NoSupportError,
    SingularPostureError,
    SingularSystemError,
    UnreachableError,
)
from .kinematics import LegJoints, forward_kinematics, inverse_kinematics, plan_to_joints
from .planner import TaskSpacePlan, plan_cycle, plan_pelvis, plan_swing_foot, sample_plan, sample_walk
from .polynomial import BoundaryCondition, Coupling, Polynomial, evaluate, solve_bvp, solve_coupled_bvp
from .simulator import ContactEvent, Report, Scenario, SimTrace, run, summarize
from .terrain import ContactSwitchReading, SensorConfig, Segment, Terrain, height_at, sample_switches

__version__ = "0.1.0"
