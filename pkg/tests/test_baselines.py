import math
from pathlib import Path

import pytest

from clutterplan.baselines import (
    DistanceConfig,
    VfhConfig,
    distance_planner,
    hand_path,
    swept_objects,
    vfh_local_planner,
)
from clutterplan.geometry import ObjectSpec, Workspace, path_length
from clutterplan.harness import run_episode
from clutterplan.motion import AlwaysSucceed, ScriptedFault
from clutterplan.planner import DONE, FAIL, reloc_path
from clutterplan.scenario import load_scenario
from clutterplan.tgraph import ROBOT, gen_graph
from clutterplan.world import WorldState
from oracles import best_path

FIX = Path(__file__).parent / "fixtures"
W = Workspace()


def one_blocker():
    t = ObjectSpec(0, 0.45, 0.3, 0.03, 0.065, is_target=True)
    b = ObjectSpec(1, 0.45, 0.12, 0.03, 0.065)
    side = ObjectSpec(2, 0.8, 0.35, 0.03, 0.065)
    return WorldState.from_objects([t, b, side], W)


def pocket():
    # left, right and front discs close a pocket around the target; only the
    # front one, once gone, opens a way in
    t = ObjectSpec(0, 0.45, 0.30, 0.03, 0.065, is_target=True)
    front = ObjectSpec(1, 0.45, 0.17, 0.03, 0.065)
    left = ObjectSpec(2, 0.32, 0.30, 0.03, 0.065)
    right = ObjectSpec(3, 0.58, 0.30, 0.03, 0.065)
    return WorldState.from_objects([t, front, left, right], W)


def test_hand_path_in_empty_shelf_is_straight():
    p = hand_path((0.45, 0.3), W)
    assert p[0] == W.robot_home and p[-1] == (0.45, 0.3)
    assert path_length(p) == pytest.approx(0.4, abs=0.01)


def test_hand_path_unreachable_goal():
    assert hand_path((0.01, 0.2), W) is None


def test_swept_objects_ordered_along_path():
    path = [(0.0, 0.0), (1.0, 0.0)]
    objs = [ObjectSpec(i, x, y, 0.02, 0.06) for i, (x, y) in enumerate([(0.7, 0.03), (0.2, -0.04), (0.5, 0.2)])]
    assert [o.id for o in swept_objects(path, 0.06, objs)] == [1, 0]
    assert [o.id for o in swept_objects(path, 0.4, objs)] == [1, 2, 0]


def test_distance_straight_line_single_blocker():
    out = distance_planner(one_blocker(), AlwaysSucceed(), W)
    assert out.status == DONE
    assert out.relocated == [1, 0]


def test_distance_failure_widens_band_by_two_cm():
    out = distance_planner(one_blocker(), ScriptedFault({1: 1}), W)
    widths = [e.param for e in out.events]
    assert widths[0] == pytest.approx(0.06)
    widen = [e for e in out.events if e.action == "widen"]
    assert len(widen) == 1
    assert widen[0].param == pytest.approx(0.08)
    assert out.success


def test_distance_detour_scene_removes_more_than_min_hop():
    world = load_scenario(FIX / "distance_detour.json")
    g = gen_graph(world.known_objects(), W)
    hops, _ = best_path({v: g.neighbors(v) for v in g.nodes}, g.node_poses, ROBOT, world.target_id)
    assert hops == 2
    d = run_episode(world.copy(), "distance")
    p = run_episode(world.copy(), "proposed")
    assert p.relocated == hops
    assert d.success and d.relocated > p.relocated


def test_distance_terminates_when_corridor_exists():
    for name in ("four_objects.json", "edge_failure.json", "distance_detour.json"):
        world = load_scenario(FIX / name)
        assert distance_planner(world, AlwaysSucceed(), W).status == DONE


def test_distance_max_width_cap():
    cfg = DistanceConfig(max_width=0.07)
    out = distance_planner(one_blocker(), ScriptedFault({1: "always"}), W, cfg)
    assert out.status == FAIL
    assert out.reason == "band exceeded max width"


def test_distance_gives_up_when_band_cannot_grow_usefully():
    out = distance_planner(one_blocker(), ScriptedFault({i: "always" for i in range(3)}), W)
    assert out.status == FAIL
    assert out.reason == "no feasible object in band"


def test_vfh_unobstructed_target():
    t = ObjectSpec(0, 0.45, 0.3, 0.03, 0.065, is_target=True)
    side = ObjectSpec(1, 0.1, 0.1, 0.03, 0.065)
    out = vfh_local_planner(WorldState.from_objects([t, side], W), AlwaysSucceed(), W)
    assert out.relocated == [0]


def test_vfh_takes_reachable_target_despite_object_in_front():
    out = vfh_local_planner(one_blocker(), AlwaysSucceed(), W)
    assert out.relocated == [0]


def test_vfh_single_blocker():
    out = vfh_local_planner(pocket(), AlwaysSucceed(), W)
    assert out.relocated == [1, 0]


def test_vfh_failure_widens_window_to_100_degrees():
    out = vfh_local_planner(pocket(), ScriptedFault({1: 1}), W)
    widen = [e for e in out.events if e.action == "widen"]
    assert len(widen) == 1
    assert out.events[0].param == 90.0
    assert widen[0].param == 100.0


def test_vfh_window_exhaustion():
    out = vfh_local_planner(pocket(), ScriptedFault({i: "always" for i in range(4)}), W,
                            VfhConfig(initial_angle=350.0))
    assert out.status == FAIL


def test_vfh_pocket_scene():
    world = load_scenario(FIX / "vfh_pocket.json")
    p = run_episode(world.copy(), "proposed")
    v = run_episode(world.copy(), "vfh")
    assert p.success
    g = gen_graph(world.known_objects(), W)
    assert p.relocated == reloc_path(g, world.target_id).k
    assert (not v.success) or v.relocated > p.relocated


@pytest.mark.parametrize("cfg", [dict(initial_width=0), dict(width_increment=-1)])
def test_distance_config_validation(cfg):
    with pytest.raises(ValueError):
        DistanceConfig(**cfg)


def test_vfh_config_validation():
    with pytest.raises(ValueError):
        VfhConfig(max_angle=400)
    with pytest.raises(ValueError):
        VfhConfig(initial_angle=0)


def test_baselines_require_detected_target():
    world = load_scenario(FIX / "hidden_target.json")
    with pytest.raises(ValueError):
        distance_planner(world, AlwaysSucceed(), W)
    with pytest.raises(ValueError):
        vfh_local_planner(world, AlwaysSucceed(), W)


def test_bearing_window_uses_robot_home():
    # the only blocker off to the side of a 90 degree window is ignored
    t = ObjectSpec(0, 0.45, 0.3, 0.03, 0.065, is_target=True)
    far_side = ObjectSpec(1, 0.85, 0.05, 0.03, 0.065)
    out = vfh_local_planner(WorldState.from_objects([t, far_side], W), AlwaysSucceed(), W)
    assert out.relocated == [0]
    assert math.degrees(math.atan2(0.05 + 0.1, 0.85 - 0.45)) < 45
