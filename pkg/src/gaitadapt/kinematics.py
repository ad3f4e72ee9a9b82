"""Forward and closed-form inverse kinematics of the 6-DOF legs.

Joint order along each leg: hip yaw (z), hip roll (x), hip pitch (y) with
intersecting axes, knee pitch (y), ankle pitch (y), ankle roll (x).  With
all joints at zero the leg hangs straight down from the hip, which sits at
``(0, +-hip_spacing/2, 0)`` in the pelvis frame.  A positive knee angle
bends the shank backward (human-like knee).

The inverse solution reverses the chain: seen from the foot, the ankle
roll, ankle pitch and knee alone fix where the hip is, so those three come
from the hip position in the foot frame; the three intersecting hip
joints then absorb the remaining rotation.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass

import numpy as np

from .core import SINGULARITY_EPS, Pose3, RobotGeometry, Side, TaskSpaceState
from .errors import SingularPostureError, UnreachableError

_REACH_TOL = 1e-12


@dataclass(frozen=True)
class LegJoints:
    hip_yaw: float = 0.0
    hip_roll: float = 0.0
    hip_pitch: float = 0.0
    knee_pitch: float = 0.0
    ankle_pitch: float = 0.0
    ankle_roll: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self))


JOINT_NAMES = tuple(f for f in LegJoints.__dataclass_fields__)


def rot_x(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rpy_to_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    return rot_z(yaw) @ rot_y(pitch) @ rot_x(roll)


def matrix_to_rpy(r: np.ndarray) -> tuple[float, float, float]:
    roll = math.atan2(r[2, 1], r[2, 2])
    pitch = math.atan2(-r[2, 0], math.hypot(r[0, 0], r[1, 0]))
    yaw = math.atan2(r[1, 0], r[0, 0])
    return roll, pitch, yaw


def hip_position(g: RobotGeometry, side: Side) -> np.ndarray:
    return np.array([0.0, side.sign * g.hip_spacing / 2, 0.0])


def leg_frames(j: LegJoints, g: RobotGeometry, side: Side) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """``{link: (rotation, origin)}`` in the pelvis frame for thigh, shank, ankle, foot.

    The foot frame origin is at the ankle joint; the sole centre lies
    ``ankle_height`` below it along the foot z axis.
    """
    hip = hip_position(g, side)
    r_thigh = rot_z(j.hip_yaw) @ rot_x(j.hip_roll) @ rot_y(j.hip_pitch)
    knee = hip + r_thigh @ np.array([0.0, 0.0, -g.thigh_length])
    r_shank = r_thigh @ rot_y(j.knee_pitch)
    ankle = knee + r_shank @ np.array([0.0, 0.0, -g.shank_length])
    r_ankle = r_shank @ rot_y(j.ankle_pitch)
    r_foot = r_ankle @ rot_x(j.ankle_roll)
    return {
        "thigh": (r_thigh, hip),
        "shank": (r_shank, knee),
        "ankle": (r_ankle, ankle),
        "foot": (r_foot, ankle),
    }


def forward_kinematics(j: LegJoints, g: RobotGeometry, side: Side) -> Pose3:
    """Sole-centre pose relative to the pelvis centre."""
    r_foot, ankle = leg_frames(j, g, side)["foot"]
    sole = ankle + r_foot @ np.array([0.0, 0.0, -g.ankle_height])
    roll, pitch, yaw = matrix_to_rpy(r_foot)
    return Pose3(float(sole[0]), float(sole[1]), float(sole[2]), roll, pitch, yaw)


def leg_link_coms(j: LegJoints, g: RobotGeometry, side: Side) -> list[tuple[float, np.ndarray]]:
    """``(mass, CoM position in pelvis frame)`` for the four leg links."""
    frames = leg_frames(j, g, side)
    out = []
    for name, mass, com in (("thigh", g.thigh_mass, g.thigh_com),
                            ("shank", g.shank_mass, g.shank_com),
                            ("ankle", g.ankle_mass, g.ankle_com),
                            ("foot", g.foot_mass, g.foot_com)):
        rot, origin = frames[name]
        out.append((mass, origin + rot @ np.asarray(com)))
    return out


def inverse_kinematics(foot_rel_pelvis: Pose3, g: RobotGeometry, side: Side,
                       singularity_eps: float = 0.0) -> LegJoints:
    """Joint angles placing the sole at ``foot_rel_pelvis``.

    The knee-forward branch (``knee_pitch >= 0``) is always returned.  With
    ``singularity_eps > 0`` a hip-to-ankle distance within that margin of
    full extension raises :class:`SingularPostureError`.
    """
    f = foot_rel_pelvis
    r_foot = rpy_to_matrix(f.roll, f.pitch, f.yaw)
    sole = np.array([f.x, f.y, f.z])
    ankle = sole + r_foot @ np.array([0.0, 0.0, g.ankle_height])
    r = r_foot.T @ (hip_position(g, side) - ankle)
    dist = float(np.linalg.norm(r))

    l1, l2 = g.thigh_length, g.shank_length
    if dist > l1 + l2 + _REACH_TOL or dist < abs(l1 - l2) - _REACH_TOL:
        raise UnreachableError(
            f"{side.value} leg: hip-to-ankle {dist:.6f} m outside [{abs(l1 - l2)}, {l1 + l2}]", side)
    if singularity_eps > 0 and dist > l1 + l2 - singularity_eps:
        raise SingularPostureError(
            f"{side.value} leg: knee within {singularity_eps} m of full extension", side)

    cos_knee = (dist * dist - l1 * l1 - l2 * l2) / (2 * l1 * l2)
    knee = math.acos(min(1.0, max(-1.0, cos_knee)))
    ankle_roll = math.atan2(r[1], r[2])
    ux, uz = -l1 * math.sin(knee), l2 + l1 * math.cos(knee)
    ankle_pitch = math.atan2(ux, uz) - math.atan2(r[0], math.hypot(r[1], r[2]))

    r_hip = r_foot @ rot_x(-ankle_roll) @ rot_y(-(knee + ankle_pitch))
    hip_roll = math.atan2(r_hip[2, 1], math.hypot(r_hip[0, 1], r_hip[1, 1]))
    hip_yaw = math.atan2(-r_hip[0, 1], r_hip[1, 1])
    hip_pitch = math.atan2(-r_hip[2, 0], r_hip[2, 2])
    return LegJoints(hip_yaw, hip_roll, hip_pitch, knee, ankle_pitch, ankle_roll)


def relative_pose(foot: Pose3, pelvis: Pose3) -> Pose3:
    """Foot pose expressed in the pelvis frame."""
    r_p = rpy_to_matrix(pelvis.roll, pelvis.pitch, pelvis.yaw)
    r_f = rpy_to_matrix(foot.roll, foot.pitch, foot.yaw)
    d = r_p.T @ (np.array(foot.position) - np.array(pelvis.position))
    roll, pitch, yaw = matrix_to_rpy(r_p.T @ r_f)
    return Pose3(float(d[0]), float(d[1]), float(d[2]), roll, pitch, yaw)


def plan_to_joints(state: TaskSpaceState, g: RobotGeometry,
                   singularity_eps: float = SINGULARITY_EPS) -> tuple[LegJoints, LegJoints]:
    """``(left, right)`` joint angles for a world-frame task-space state."""
    out = []
    for side in (Side.LEFT, Side.RIGHT):
        rel = relative_pose(state.foot(side), state.pelvis)
        out.append(inverse_kinematics(rel, g, side, singularity_eps))
    return out[0], out[1]
