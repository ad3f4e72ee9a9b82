import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaitadapt.core import Pose3, RobotGeometry
from gaitadapt.terrain import (
    ContactSwitchReading,
    SensorConfig,
    Segment,
    Terrain,
    height_at,
    sample_switches,
)

G = RobotGeometry()
CFG = SensorConfig(0.003)


def test_empty_terrain_is_flat():
    assert height_at(Terrain(), 12.3, -4.0) == 0.0


def test_segment_lookup_and_closed_left_boundary():
    t = Terrain.from_tuples([(0.5, 0.8, 0.02)])
    assert height_at(t, 0.6) == 0.02
    assert height_at(t, 0.5) == 0.02
    assert height_at(t, 0.8) == 0.0
    assert height_at(t, 0.6, 7.0) == 0.02  # full width by default


def test_lane_restricted_segment():
    t = Terrain.from_tuples([(0.5, 0.8, 0.02, 0.1, 0.5)])
    assert t.height_at(0.6, 0.2) == 0.02
    assert t.height_at(0.6, 0.0) == 0.0


def test_overlap_rejected():
    with pytest.raises(ValueError):
        Terrain.from_tuples([(0.0, 1.0, 0.01), (0.5, 1.5, 0.02)])
    Terrain.from_tuples([(0.0, 1.0, 0.01, 0.0, 1.0), (0.5, 1.5, 0.02, -1.0, 0.0)])


@pytest.mark.parametrize("bad", [(1.0, 0.5, 0.0), (0.0, 1.0, float("nan"))])
def test_invalid_segment(bad):
    with pytest.raises(ValueError):
        Segment(*bad)


def test_sensor_config_validation():
    with pytest.raises(ValueError):
        SensorConfig(-0.001)
    with pytest.raises(ValueError):
        SensorConfig(0.003, latency_ticks=2)


def test_just_above_trigger_plane():
    r = sample_switches(Pose3(0, 0, 0.003 + 1e-6), Terrain(), CFG, G)
    assert r.corners == (False,) * 4 and not r.con_sw


def test_exactly_at_trigger_plane():
    r = sample_switches(Pose3(0, 0, 0.003), Terrain(), CFG, G)
    assert all(r.corners) and r.con_sw


def test_front_corners_over_obstacle_edge():
    t = Terrain.from_tuples([(1.0, 2.0, 0.02)])
    r = sample_switches(Pose3(1.0, 0, 0.021), t, CFG, G)
    front_left, rear_left, rear_right, front_right = r.corners
    assert front_left and front_right and not rear_left and not rear_right


def test_zero_offset_is_exact_contact():
    cfg = SensorConfig(0.0)
    assert not sample_switches(Pose3(0, 0, 1e-9), Terrain(), cfg, G).con_sw
    assert sample_switches(Pose3(0, 0, 0.0), Terrain(), cfg, G).con_sw


terrain_strategy = st.lists(
    st.tuples(st.floats(-0.5, 0.5), st.floats(0.05, 0.4), st.floats(-0.05, 0.05)), max_size=3,
).map(lambda rows: Terrain.from_tuples(
    [(x0 + 2 * i, x0 + 2 * i + w, h) for i, (x0, w, h) in enumerate(rows)]))
pose_strategy = st.builds(Pose3, st.floats(-1, 6), st.floats(-0.5, 0.5), st.floats(-0.1, 0.1),
                          yaw=st.floats(-0.5, 0.5))


@settings(max_examples=300, deadline=None)
@given(terrain_strategy, pose_strategy, st.floats(0.0, 0.05), st.floats(0.0, 0.01))
def test_lowering_never_clears_a_corner(terrain, pose, drop, dz):
    cfg = SensorConfig(dz)
    hi = sample_switches(pose, terrain, cfg, G)
    lo = sample_switches(Pose3(pose.x, pose.y, pose.z - drop, yaw=pose.yaw), terrain, cfg, G)
    assert all(b or not a for a, b in zip(hi.corners, lo.corners))


@settings(max_examples=200, deadline=None)
@given(st.tuples(st.booleans(), st.booleans(), st.booleans(), st.booleans()))
def test_con_sw_is_or_of_corners(bits):
    assert ContactSwitchReading(bits).con_sw == any(bits)
