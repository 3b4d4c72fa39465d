import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clutterplan.corridor import (
    CorridorQuery,
    GridOccupancy,
    ObstacleField,
    corridor_exists,
    occupancy_grid,
    point_accessible,
)
from clutterplan.geometry import ConfigurationError, Disc, Workspace
from oracles import FineGrid, fine_connected

W = Workspace()


def test_empty_workspace_connects():
    q = CorridorQuery(0.08, (0.2, 0.2), (0.7, 0.3), (), W)
    assert corridor_exists(q)


def test_robot_home_reaches_back_of_empty_shelf():
    q = CorridorQuery(0.085, W.robot_home, (0.45, 0.3), (), W)
    assert corridor_exists(q)


def test_wall_to_wall_line_blocks():
    # gaps of 4 cm between discs, far below the 17 cm the moving disc needs
    wall = tuple(Disc(x, 0.2, 0.03) for x in np.arange(0.03, 0.9, 0.1))
    q = CorridorQuery(0.085, W.robot_home, (0.45, 0.35), wall, W)
    assert not corridor_exists(q)


def test_blocked_endpoint_is_infeasible_not_an_error():
    q = CorridorQuery(0.085, (0.02, 0.2), (0.45, 0.2), (), W)
    assert corridor_exists(q) is False


def test_endpoint_outside_domain_is_infeasible():
    q = CorridorQuery(0.01, (2.0, 0.2), (0.45, 0.2), (), W)
    assert corridor_exists(q) is False


@pytest.mark.parametrize("res", [0.0, -0.01, 0.5])
def test_bad_resolution_raises(res):
    with pytest.raises(ConfigurationError):
        GridOccupancy(W, res)


def test_cell_centers_cover_domain():
    g = occupancy_grid(W, 0.01)
    assert g.shape == (90, 65)
    assert g.xs[0] == pytest.approx(0.005)
    assert g.ys[0] == pytest.approx(-0.195)
    assert g.cell_of((0.899, 0.449)) == (89, 64)
    assert g.cell_of((0.95, 0.2)) is None


def test_free_cells_keep_clearance():
    g = occupancy_grid(W, 0.01)
    d = Disc(0.4, 0.2, 0.03)
    free = g.free_mask(0.08, [d])
    assert np.all(np.hypot(g.X[free] - 0.4, g.Y[free] - 0.2) >= 0.11 - 1e-12)
    assert np.all(g.wall_clearance[free] >= 0.08)


def test_point_accessible_ignores_the_object_at_the_point():
    here = Disc(0.45, 0.2, 0.03)
    assert point_accessible((0.45, 0.2), 0.08, [here], W)
    # a disc elsewhere that does not contain the point still counts
    fence = [Disc(x, 0.1, 0.03) for x in np.arange(0.03, 0.9, 0.06)]
    assert not point_accessible((0.45, 0.3), 0.05, fence, W)


def test_obstacle_field_matches_corridor_exists():
    rng = np.random.default_rng(3)
    discs = {i: Disc(*rng.uniform([0.05, 0.05], [0.85, 0.4]), 0.03) for i in range(8)}
    grid = occupancy_grid(W, 0.01)
    f = ObstacleField(grid, 0.085, discs)
    for a, b in [(0, 1), (2, 5), (3, 7)]:
        q = CorridorQuery(0.085, discs[a].center, discs[b].center,
                          tuple(d for k, d in discs.items() if k not in (a, b)), W)
        assert f.connected(discs[a].center, discs[b].center, exclude=(a, b)) == corridor_exists(q, 0.01)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.02, 0.1), st.floats(0.0, 0.05))
def test_monotone_in_radius(seed, r, dr):
    rng = np.random.default_rng(seed)
    discs = tuple(Disc(*rng.uniform([0.05, 0.05], [0.85, 0.4]), 0.03) for _ in range(6))
    goal = tuple(rng.uniform([0.1, 0.05], [0.8, 0.4]))
    big = CorridorQuery(r + dr, W.robot_home, goal, discs, W)
    small = CorridorQuery(r, W.robot_home, goal, discs, W)
    if corridor_exists(big, 0.01):
        assert corridor_exists(small, 0.01)


def test_agrees_with_fine_grid_oracle_on_non_marginal_queries():
    res = 0.01
    grid = FineGrid(W, res / 4)
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 25:
        discs = tuple(Disc(*rng.uniform([0.05, 0.05], [0.85, 0.4]), rng.uniform(0.025, 0.03)) for _ in range(5))
        goal = tuple(rng.uniform([0.1, 0.05], [0.8, 0.4]))
        if any(math.hypot(goal[0] - d.x, goal[1] - d.y) < d.radius + 0.1 for d in discs):
            continue
        r = float(rng.uniform(0.05, 0.1))
        lo = fine_connected(grid, r - 2 * res, W.robot_home, goal, discs)
        hi = fine_connected(grid, r + 2 * res, W.robot_home, goal, discs)
        if lo != hi:
            continue  # the answer flips within two cells of slack
        assert corridor_exists(CorridorQuery(r, W.robot_home, goal, discs, W), res) == lo
        checked += 1
