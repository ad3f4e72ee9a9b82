import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaitadapt.core import GaitParams, Pose3, RobotGeometry, Side, SupportPhase, TaskSpaceState
from gaitadapt.errors import SingularPostureError, UnreachableError
from gaitadapt.kinematics import (
    LegJoints,
    forward_kinematics,
    inverse_kinematics,
    matrix_to_rpy,
    plan_to_joints,
    rpy_to_matrix,
)
from gaitadapt.planner import plan_cycle, sample_plan
from oracles import fk_transform_chain

G = RobotGeometry()


def pose_vec(p: Pose3) -> np.ndarray:
    return np.array([p.x, p.y, p.z, p.roll, p.pitch, p.yaw])


def test_zero_pose_right_leg():
    p = forward_kinematics(LegJoints(), G, Side.RIGHT)
    assert pose_vec(p) == pytest.approx([0.0, -0.115, -0.818, 0, 0, 0], abs=1e-15)


@pytest.mark.parametrize("side", list(Side))
def test_fk_matches_transform_chain_oracle(side):
    j = LegJoints(knee_pitch=math.pi / 2)
    h = fk_transform_chain(j.as_array(), side.sign * G.hip_spacing / 2, G.thigh_length,
                           G.shank_length, G.ankle_height)
    p = forward_kinematics(j, G, side)
    assert (p.x, p.y, p.z) == pytest.approx(tuple(h[:3, 3]), abs=1e-14)


def test_hip_yaw_maps_to_foot_yaw():
    p = forward_kinematics(LegJoints(hip_yaw=0.3), G, Side.LEFT)
    assert p.yaw == pytest.approx(0.3, abs=1e-15)
    assert p.roll == pytest.approx(0.0, abs=1e-15)


def test_straight_leg_under_hip_has_zero_knee():
    target = Pose3(0.0, -0.115, -G.leg_length)
    j = inverse_kinematics(target, G, Side.RIGHT)
    assert j.knee_pitch == pytest.approx(0.0, abs=1e-6)


def test_beyond_reach_is_unreachable():
    target = Pose3(0.0, -0.115, -G.leg_length - 0.001)
    with pytest.raises(UnreachableError) as info:
        inverse_kinematics(target, G, Side.RIGHT)
    assert info.value.side is Side.RIGHT


def test_full_extension_is_singular_with_guard():
    target = Pose3(0.0, 0.115, -G.leg_length)
    with pytest.raises(SingularPostureError):
        inverse_kinematics(target, G, Side.LEFT, singularity_eps=1e-6)


def test_upright_double_stance_symmetric():
    foot_l, foot_r = Pose3(0.0, 0.115, 0.0), Pose3(0.0, -0.115, 0.0)
    pelvis = Pose3(0.0, 0.0, 0.79)
    s = TaskSpaceState(foot_l, foot_r, pelvis, 0.0, SupportPhase.DSP)
    left, right = plan_to_joints(s, G)
    assert left.knee_pitch == pytest.approx(right.knee_pitch, abs=1e-12)
    assert left.hip_roll == pytest.approx(-right.hip_roll, abs=1e-12)
    assert left.ankle_roll == pytest.approx(-right.ankle_roll, abs=1e-12)
    for j, side in ((left, Side.LEFT), (right, Side.RIGHT)):
        p = forward_kinematics(j, G, side)
        foot = s.foot(side)
        assert (p.x, p.y, p.z + pelvis.z) == pytest.approx((foot.x, foot.y, foot.z), abs=1e-12)


def test_pelvis_at_full_extension_height_is_singular():
    s = TaskSpaceState(Pose3(0, 0.115, 0), Pose3(0, -0.115, 0), Pose3(0, 0, G.leg_length),
                       0.0, SupportPhase.DSP)
    with pytest.raises(SingularPostureError):
        plan_to_joints(s, G)


def test_nominal_mid_ssp_joints_bent():
    s = sample_plan(plan_cycle(GaitParams(), 0), 0.5)
    for j in plan_to_joints(s, G):
        assert np.isfinite(j.as_array()).all()
        assert j.knee_pitch > 0


def test_ik_continuity_along_plan_at_1khz():
    p = GaitParams()
    prev = None
    worst = 0.0
    for k in range(2):
        plan = plan_cycle(p, k)
        for i in range(int(round(p.cycle_period * 1000))):
            left, right = plan_to_joints(sample_plan(plan, i / 1000), G)
            vec = np.concatenate([left.as_array(), right.as_array()])
            if prev is not None:
                worst = max(worst, np.abs(vec - prev).max())
            prev = vec
    assert worst < 0.05


def test_rpy_round_trip():
    r = rpy_to_matrix(0.1, -0.2, 0.3)
    assert matrix_to_rpy(r) == pytest.approx((0.1, -0.2, 0.3), abs=1e-15)


joint_strategy = st.builds(
    LegJoints,
    hip_yaw=st.floats(-0.8, 0.8), hip_roll=st.floats(-0.5, 0.5), hip_pitch=st.floats(-1.0, 1.0),
    knee_pitch=st.floats(0.05, 2.5), ankle_pitch=st.floats(-1.0, 1.0), ankle_roll=st.floats(-0.5, 0.5),
)


@settings(max_examples=300, deadline=None)
@given(joint_strategy, st.sampled_from(list(Side)))
def test_fk_ik_round_trip(j, side):
    target = forward_kinematics(j, G, side)
    back = forward_kinematics(inverse_kinematics(target, G, side), G, side)
    d = pose_vec(back) - pose_vec(target)
    d[3:] = np.angle(np.exp(1j * d[3:]))  # yaw of +pi and -pi are the same heading
    assert np.abs(d).max() < 1e-9


def hip_height_over_ankle(j: LegJoints) -> float:
    """Height of the hip above the ankle, measured in the foot frame."""
    return (G.shank_length * np.cos(j.ankle_pitch) * np.cos(j.ankle_roll)
            + G.thigh_length * np.cos(j.ankle_pitch + j.knee_pitch) * np.cos(j.ankle_roll))


# the closed form assumes the hip is above the ankle in the foot frame;
# below it the mirrored branch reaches the same pose
upright_joints = joint_strategy.filter(
    lambda j: hip_height_over_ankle(j) > 0.05 and abs(j.hip_pitch + j.knee_pitch + j.ankle_pitch) < np.pi / 2 - 0.05)


@settings(max_examples=200, deadline=None)
@given(upright_joints, st.sampled_from(list(Side)))
def test_ik_recovers_in_range_joints(j, side):
    got = inverse_kinematics(forward_kinematics(j, G, side), G, side)
    assert got.as_array() == pytest.approx(j.as_array(), abs=1e-7)


@settings(max_examples=200, deadline=None)
@given(st.floats(-0.2, 0.2), st.floats(-0.1, 0.1), st.floats(-0.78, -0.5), st.floats(-0.3, 0.3))
def test_mirror_symmetry(x, dy, z, yaw):
    left_target = Pose3(x, 0.115 + dy, z, 0.0, 0.0, yaw)
    right_target = Pose3(x, -(0.115 + dy), z, 0.0, 0.0, -yaw)
    try:
        jl = inverse_kinematics(left_target, G, Side.LEFT)
    except UnreachableError:
        return
    jr = inverse_kinematics(right_target, G, Side.RIGHT)
    assert jr.hip_yaw == pytest.approx(-jl.hip_yaw, abs=1e-10)
    assert jr.hip_roll == pytest.approx(-jl.hip_roll, abs=1e-10)
    assert jr.ankle_roll == pytest.approx(-jl.ankle_roll, abs=1e-10)
    assert jr.hip_pitch == pytest.approx(jl.hip_pitch, abs=1e-10)
    assert jr.knee_pitch == pytest.approx(jl.knee_pitch, abs=1e-10)
    assert jr.ankle_pitch == pytest.approx(jl.ankle_pitch, abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(joint_strategy)
def test_knee_branch_is_forward(j):
    got = inverse_kinematics(forward_kinematics(j, G, Side.LEFT), G, Side.LEFT)
    assert got.knee_pitch >= 0
