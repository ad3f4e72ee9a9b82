import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gaitadapt.balance import (
    LinkState,
    SupportPolygon,
    compute_zmp,
    convex_hull,
    foot_corners,
    required_friction,
    second_difference,
    support_polygon,
    zmp_margin,
)
from gaitadapt.core import GRAVITY, Pose3, RobotGeometry, Side, SupportPhase, TaskSpaceState
from gaitadapt.errors import NoStanceFootError, NoSupportError
from oracles import brute_force_hull, crossing_number_inside

G = RobotGeometry()


def ssp_state(stance=Pose3(), swing_side=Side.LEFT):
    swing = Pose3(0.5, 0.5, 0.05)
    left, right = (swing, stance) if swing_side is Side.LEFT else (stance, swing)
    return TaskSpaceState(left, right, Pose3(0, 0, 0.7), 0.0, SupportPhase.SSP, swing_side)


def test_static_zmp_is_com_projection():
    links = [LinkState((0.1, 0.2, 0.5), (0, 0, 0), 2.0), LinkState((-0.3, 0.0, 0.9), (0, 0, 0), 6.0)]
    x, y = compute_zmp(links)
    assert (x, y) == pytest.approx(((0.2 - 1.8) / 8, 0.4 / 8), abs=1e-15)


def test_single_mass_pendulum_formula():
    x, _ = compute_zmp([LinkState((0.05, 0.0, 0.8), (1.5, 0.0, 0.0), 10.0)])
    assert x == pytest.approx(0.05 - 1.5 * 0.8 / GRAVITY, abs=1e-15)


def test_free_fall_has_no_support():
    links = [LinkState((0, 0, 1), (0, 0, -GRAVITY), 1.0)]
    with pytest.raises(NoSupportError):
        compute_zmp(links)
    with pytest.raises(NoSupportError):
        required_friction(links)


def test_required_friction_examples():
    assert required_friction([LinkState((0, 0, 1), (0, 0, 0), 3.0)]) == 0.0
    assert required_friction([LinkState((0, 0, 1), (GRAVITY, 0, 0), 3.0)]) == pytest.approx(1.0, abs=1e-15)


def test_second_difference_exact_on_quadratics():
    t = np.arange(10) * 0.01
    acc = second_difference(3.0 * t ** 2 - t, 0.01)
    assert acc == pytest.approx(np.full(10, 6.0), abs=1e-9)


def test_ssp_polygon_is_foot_rectangle():
    poly = support_polygon(ssp_state(), G)
    xs = sorted({round(v[0], 12) for v in poly.vertices})
    ys = sorted({round(v[1], 12) for v in poly.vertices})
    assert xs == [-0.1325, 0.1325] and ys == [-0.08, 0.08]
    assert poly.area == pytest.approx(0.265 * 0.16)


def test_dsp_hull_matches_brute_force_oracle():
    s = TaskSpaceState(Pose3(0.1, 0.23, 0), Pose3(0, 0, 0), Pose3(0, 0, 0.7), 0.0, SupportPhase.DSP)
    poly = support_polygon(s, G)
    pts = foot_corners(0, 0, 0, G) + foot_corners(0.1, 0.23, 0, G)
    assert len(poly.vertices) == 6
    assert set(poly.vertices) == brute_force_hull(pts)


def test_coincident_feet_give_single_rectangle():
    s = TaskSpaceState(Pose3(), Pose3(), Pose3(0, 0, 0.7), 0.0, SupportPhase.DSP)
    assert len(support_polygon(s, G).vertices) == 4


def test_no_stance_foot():
    with pytest.raises(NoStanceFootError):
        support_polygon(ssp_state(), G, feet=())


def test_margin_examples():
    poly = support_polygon(ssp_state(), G)
    assert zmp_margin((0.0, 0.0), poly) == pytest.approx(0.08, abs=1e-15)
    assert zmp_margin((0.1325, 0.08), poly) == pytest.approx(0.0, abs=1e-15)
    assert zmp_margin((0.1425, 0.0), poly) == pytest.approx(-0.01, abs=1e-15)


def test_polygon_validation():
    with pytest.raises(ValueError):
        SupportPolygon(((0, 0), (1, 0), (2, 0)))
    with pytest.raises(ValueError):
        SupportPolygon(((0, 0), (0, 1), (1, 1), (1, 0)))  # clockwise


# --- properties ------------------------------------------------------------------

finite = st.floats(-1.0, 1.0)
link_strategy = st.builds(
    LinkState,
    st.tuples(finite, finite, st.floats(0.05, 1.5)),
    st.tuples(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3)),
    st.floats(0.5, 30.0),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(link_strategy, min_size=1, max_size=10), finite, finite)
def test_zmp_translation_equivariant(links, dx, dy):
    x0, y0 = compute_zmp(links)
    moved = [LinkState((l.com_position[0] + dx, l.com_position[1] + dy, l.com_position[2]),
                       l.com_acceleration, l.mass) for l in links]
    x1, y1 = compute_zmp(moved)
    assert (x1 - x0, y1 - y0) == pytest.approx((dx, dy), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.lists(link_strategy, min_size=1, max_size=10), st.floats(0.01, 100.0))
def test_mass_scaling_invariant(links, k):
    scaled = [LinkState(l.com_position, l.com_acceleration, l.mass * k) for l in links]
    assert compute_zmp(scaled) == pytest.approx(compute_zmp(links), abs=1e-9)
    assert required_friction(scaled) == pytest.approx(required_friction(links), rel=1e-9, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(link_strategy, min_size=1, max_size=10))
def test_static_zmp_equals_com(links):
    static = [LinkState(l.com_position, (0.0, 0.0, 0.0), l.mass) for l in links]
    m = np.array([l.mass for l in static])
    p = np.array([l.com_position for l in static])
    com = (m[:, None] * p).sum(axis=0) / m.sum()
    assert compute_zmp(static) == pytest.approx(tuple(com[:2]), abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=3, max_size=25))
def test_hull_agrees_with_brute_force(raw):
    pts = [(x / 10, y / 10) for x, y in raw]
    assume(len(set(pts)) >= 2)
    assert set(convex_hull(pts)) == brute_force_hull(pts)


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.3, 0.3), st.floats(0.1, 0.3), st.floats(-0.3, 0.3))
def test_margin_sign_agrees_with_crossing_number(fx, fy, yaw):
    s = TaskSpaceState(Pose3(fx, fy, 0, yaw=yaw), Pose3(), Pose3(0, 0, 0.7), 0.0, SupportPhase.DSP)
    poly = support_polygon(s, G)
    rng = np.random.default_rng(0)
    for x, y in rng.uniform(-0.6, 0.6, size=(200, 2)):
        m = zmp_margin((x, y), poly)
        if abs(m) > 1e-12:
            assert (m > 0) == crossing_number_inside((x, y), poly.vertices)
