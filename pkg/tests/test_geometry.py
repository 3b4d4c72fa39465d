import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clutterplan.geometry import (
    ConfigurationError,
    Disc,
    ObjectSpec,
    SceneError,
    Workspace,
    disc_in_workspace,
    disc_overlaps,
    grasped_radius,
    path_length,
    point_segment_distance,
    points_segment_distance,
    segment_disc_clearance,
    validate_scene,
    wall_clearance,
)


def test_tangent_discs_do_not_overlap():
    assert not disc_overlaps(Disc(0, 0, 1), Disc(2, 0, 1))
    assert disc_overlaps(Disc(0, 0, 1), Disc(1.999, 0, 1))


def test_segment_disc_clearance_perpendicular():
    assert segment_disc_clearance(((0, 0), (4, 0)), Disc(2, 2, 1)) == pytest.approx(1.0)


def test_segment_disc_clearance_negative_when_crossing():
    assert segment_disc_clearance(((0, 0), (4, 0)), Disc(2, 0.5, 1)) == pytest.approx(-0.5)


def test_point_segment_distance_endpoint_and_degenerate():
    assert point_segment_distance((5, 0), ((0, 0), (4, 0))) == pytest.approx(1.0)
    assert point_segment_distance((3, 4), ((0, 0), (0, 0))) == pytest.approx(5.0)


coord = st.floats(-2, 2, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(coord, coord, coord, coord, coord, coord)
def test_point_segment_distance_matches_dense_sampling(px, py, ax, ay, bx, by):
    t = np.linspace(0, 1, 20001)
    sx, sy = ax + t * (bx - ax), ay + t * (by - ay)
    brute = np.hypot(sx - px, sy - py).min()
    d = point_segment_distance((px, py), ((ax, ay), (bx, by)))
    # sampling step bounds the brute-force error
    step = math.hypot(bx - ax, by - ay) / 20000
    assert brute - step - 1e-12 <= d <= brute + 1e-12


def test_vectorized_distance_agrees_with_scalar():
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1, 1, (50, 2))
    seg = ((0.1, -0.3), (0.7, 0.4))
    vec = points_segment_distance(pts[:, 0], pts[:, 1], seg)
    for (x, y), d in zip(pts, vec):
        assert d == pytest.approx(point_segment_distance((x, y), seg), abs=1e-15)


def test_workspace_defaults():
    w = Workspace()
    assert (w.length, w.width) == (0.9, 0.45)
    assert w.robot_home == pytest.approx((0.45, -0.1))
    assert w.disposal_zone == w.robot_home
    assert len(w.walls) == 3
    assert w.open_edge == ((0.0, 0.0), (0.9, 0.0))


@pytest.mark.parametrize("home", [(0.45, 0.1), (0.45, -0.5), (1.5, -0.1)])
def test_robot_home_must_be_in_front_strip(home):
    with pytest.raises(ConfigurationError):
        Workspace(robot_home=home)


def test_wall_clearance_ignores_open_edge():
    w = Workspace()
    assert wall_clearance((0.45, 0.0), w) == pytest.approx(0.45)
    assert wall_clearance((0.05, 0.2), w) == pytest.approx(0.05)


def test_disc_at_center_is_inside():
    assert disc_in_workspace(Disc(0.45, 0.225, 0.2), Workspace())
    assert not disc_in_workspace(Disc(0.02, 0.2, 0.03), Workspace())


def test_grasped_radius():
    assert grasped_radius(0.03, 0.05) == pytest.approx(0.08)
    assert grasped_radius(0.03, 0.05, 0.005) == pytest.approx(0.085)


@pytest.mark.parametrize("r,h", [(0.0, 0.06), (-0.01, 0.06), (0.03, 0.0)])
def test_object_needs_positive_size(r, h):
    with pytest.raises(SceneError):
        ObjectSpec(0, 0.1, 0.1, r, h)


def _obj(i, x, y, target=False):
    return ObjectSpec(i, x, y, 0.03, 0.065, is_target=target)


def test_validate_scene_accepts_clean_scene():
    validate_scene([_obj(0, 0.2, 0.2, True), _obj(1, 0.3, 0.2)], Workspace())


@pytest.mark.parametrize(
    "objs,msg",
    [
        ([_obj(0, 0.2, 0.2, True), _obj(0, 0.4, 0.2)], "duplicate"),
        ([_obj(0, 0.2, 0.2), _obj(1, 0.4, 0.2)], "exactly one target"),
        ([_obj(0, 0.2, 0.2, True), _obj(1, 0.4, 0.2, True)], "target"),
        ([_obj(0, 0.2, 0.2, True), _obj(1, 0.25, 0.2)], "overlap"),
        ([_obj(0, 0.01, 0.2, True)], "inside"),
    ],
)
def test_validate_scene_rejects(objs, msg):
    with pytest.raises(SceneError, match=msg):
        validate_scene(objs, Workspace())


def test_path_length():
    assert path_length([(0, 0), (3, 4), (3, 0)]) == pytest.approx(9.0)
    assert path_length([]) == 0.0
