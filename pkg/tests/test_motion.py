import numpy as np
import pytest

from clutterplan.geometry import ObjectSpec, Workspace
from clutterplan.occlusion import CameraModel
from clutterplan.motion import (
    AlwaysSucceed,
    Disc2D,
    RandomFirstFault,
    ScriptedFault,
    format_fault_table,
    parse_fault_table,
)
from clutterplan.tgraph import ROBOT, gen_graph
from clutterplan.world import WorldState

W = Workspace()


def world_of(*objs):
    return WorldState.from_objects(list(objs), W)


def test_always_succeed():
    w = world_of(ObjectSpec(0, 0.4, 0.2, 0.03, 0.065, is_target=True))
    assert AlwaysSucceed().query(0, w, W)


def test_scripted_fault_counts_per_object():
    o = ScriptedFault({1: 2, 2: "always"})
    assert [o.query(1, None, W) for _ in range(3)] == [False, False, True]
    assert [o.query(2, None, W) for _ in range(3)] == [False] * 3
    assert o.query(3, None, W)
    o.reset()
    assert not o.query(1, None, W)


def test_scripted_fault_rejects_bad_spec():
    with pytest.raises(ValueError):
        ScriptedFault({1: -1})
    with pytest.raises(ValueError):
        ScriptedFault({1: "sometimes"})


def test_fault_table_text_round_trip():
    text = "# comment\n3 always\n1 2  # trailing\n\n"
    table = parse_fault_table(text)
    assert table == {3: "always", 1: 2}
    assert parse_fault_table(format_fault_table(table)) == table


@pytest.mark.parametrize("text", ["1\n", "1 2 3\n", "x 1\n", "1 -2\n"])
def test_fault_table_malformed(text):
    with pytest.raises(ValueError):
        parse_fault_table(text)


def test_disc2d_open_object_succeeds():
    w = world_of(ObjectSpec(0, 0.45, 0.2, 0.03, 0.065, is_target=True))
    assert Disc2D().query(0, w, W)


def test_disc2d_fenced_object_fails():
    fence = [ObjectSpec(i + 1, 0.06 + 0.065 * i, 0.1, 0.03, 0.065) for i in range(13)]
    w = world_of(ObjectSpec(0, 0.45, 0.3, 0.03, 0.065, is_target=True), *fence)
    assert not Disc2D().query(0, w, W)


def test_disc2d_sees_objects_the_robot_has_not_detected():
    target = ObjectSpec(0, 0.45, 0.3, 0.03, 0.065, is_target=True)
    fence = [ObjectSpec(i + 1, 0.06 + 0.065 * i, 0.1, 0.03, 0.065) for i in range(13)]
    objs = {o.id: o for o in [target, *fence]}
    world = WorldState(objs, W, CameraModel(), "II", known={0})
    assert not Disc2D().query(0, world, W)


def test_disc2d_no_more_permissive_than_graph_with_equal_radii():
    rng = np.random.default_rng(0)
    checked = 0
    while checked < 8:
        objs = []
        while len(objs) < 7:
            o = ObjectSpec(len(objs), *rng.uniform([0.05, 0.05], [0.85, 0.4]), 0.0275, 0.065, is_target=not objs)
            if all(np.hypot(o.x - p.x, o.y - p.y) > 0.055 for p in objs):
                objs.append(o)
        world = WorldState.from_objects(objs, W)
        g = gen_graph(objs, W)
        for o in objs:
            if Disc2D().query(o.id, world, W):
                # carry leg with radius r_o + r_r + r_s equals the graph's r_g here
                assert g.has_edge(ROBOT, o.id)
        checked += 1


def test_random_first_fault_only_first_query():
    o = RandomFirstFault(p=1.0, seed=0)
    assert not o.query(5, None, W)
    assert o.query(5, None, W)


def test_random_first_fault_rate_and_order_independence():
    a = RandomFirstFault(p=0.2, seed=3)
    b = RandomFirstFault(p=0.2, seed=3)
    ids = list(range(2000))
    fa = [not a.query(i, None, W) for i in ids]
    fb = [not b.query(i, None, W) for i in reversed(ids)][::-1]
    assert fa == fb
    assert abs(np.mean(fa) - 0.2) < 0.03


def test_random_first_fault_bad_p():
    with pytest.raises(ValueError):
        RandomFirstFault(p=1.5)
