"""Comparison planners: Distance (clear the shortest hand path) and a VFH+-style local planner.

Both re-implement the published behavior as described, including the
widening rules used after a motion failure:

* Distance removes every known object touching a band around the shortest
  end-effector path to the target, nearest-first along the path. Each motion
  failure widens the band by ``width_increment``.
* VFH+ looks for blockers inside an angular window centred on the
  robot-to-goal bearing and greedily removes the accessible one closest to
  the robot, recursing through inaccessible blockers. Each motion failure
  widens the window by ``angle_increment`` degrees.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from shapely.geometry import LineString
from shapely.geometry import Point as ShapelyPoint

from .corridor import DEFAULT_RESOLUTION, ObstacleField, cells_connected, occupancy_grid
from .events import Event
from .geometry import ObjectSpec, Point, Workspace, point_segment_distance
from .motion import MotionOracle
from .planner import DONE, FAIL, TIMEOUT, PlanOutcome, _expired
from .world import WorldState


@dataclass(frozen=True)
class DistanceConfig:
    initial_width: float = 0.06
    width_increment: float = 0.02
    max_width: float | None = None  # None: widen until the band holds every object

    def __post_init__(self):
        if self.initial_width <= 0 or self.width_increment <= 0:
            raise ValueError("widths must be positive")
        if self.max_width is not None and self.max_width < self.initial_width:
            raise ValueError("max_width is below initial_width")


@dataclass(frozen=True)
class VfhConfig:
    initial_angle: float = 90.0
    angle_increment: float = 10.0
    max_angle: float = 360.0

    def __post_init__(self):
        if self.initial_angle <= 0 or self.angle_increment <= 0:
            raise ValueError("angles must be positive")
        if self.max_angle > 360.0:
            raise ValueError("max_angle cannot exceed 360 degrees")


@functools.lru_cache(maxsize=8)
def _grid_graph(w: Workspace, resolution: float, radius: float):
    """Sparse 8-connected graph over cells with wall clearance >= radius."""
    grid = occupancy_grid(w, resolution)
    free = grid.wall_clearance >= radius
    nx, ny = grid.shape
    idx = np.arange(nx * ny).reshape(nx, ny)
    rows, cols, wts = [], [], []
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        a = free[max(0, -di):nx - max(0, di), max(0, -dj):ny - max(0, dj)]
        b = free[max(0, di):nx - max(0, -di) or None, max(0, dj):ny - max(0, -dj) or None]
        ia = idx[max(0, -di):nx - max(0, di), max(0, -dj):ny - max(0, dj)]
        ib = idx[max(0, di):nx - max(0, -di) or None, max(0, dj):ny - max(0, -dj) or None]
        ok = a & b
        rows.append(ia[ok])
        cols.append(ib[ok])
        wts.append(np.full(int(ok.sum()), math.hypot(di, dj) * resolution))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    d = np.concatenate(wts)
    mat = coo_matrix((np.concatenate([d, d]), (np.concatenate([r, c]), np.concatenate([c, r]))), shape=(nx * ny, nx * ny))
    return grid, free, mat.tocsr()


def hand_path(goal: Point, w: Workspace, resolution: float = DEFAULT_RESOLUTION) -> list[Point] | None:
    """Shortest end-effector path from home to ``goal`` keeping ``r_r`` off the walls.

    Movable objects are ignored: they are what the Distance planner removes.
    Returns a simplified polyline, or None when the goal is unreachable.
    """
    grid, free, mat = _grid_graph(w, resolution, w.robot_radius)
    a = grid.cell_of(w.robot_home)
    b = grid.cell_of(goal)
    if a is None or b is None or not free[a] or not free[b]:
        return None
    ny = grid.shape[1]
    src = a[0] * ny + a[1]
    dst = b[0] * ny + b[1]
    dist, pred = dijkstra(mat, indices=src, return_predecessors=True)
    if not np.isfinite(dist[dst]):
        return None
    cells = []
    k = dst
    while k != src and k >= 0:
        cells.append(k)
        k = pred[k]
    cells.reverse()
    pts = [w.robot_home] + [(float(grid.xs[c // ny]), float(grid.ys[c % ny])) for c in cells[:-1]] + [goal]
    line = LineString(pts).simplify(resolution, preserve_topology=False)
    return [(float(x), float(y)) for x, y in line.coords]


def swept_objects(path: list[Point], width: float, objects: list[ObjectSpec]) -> list[ObjectSpec]:
    """Objects whose disc touches the band of ``width`` around ``path``, ordered along the path."""
    line = LineString(path)
    hits = []
    for o in objects:
        p = ShapelyPoint(o.x, o.y)
        if line.distance(p) < o.radius + width / 2:
            hits.append((line.project(p), o.id, o))
    hits.sort(key=lambda t: (t[0], t[1]))
    return [o for _, _, o in hits]


def distance_planner(
    world: WorldState,
    oracle: MotionOracle,
    w: Workspace,
    cfg: DistanceConfig = DistanceConfig(),
    resolution: float = DEFAULT_RESOLUTION,
    deadline: float | None = None,
    events: list[Event] | None = None,
) -> PlanOutcome:
    if not world.target_detected:
        raise ValueError("distance_planner needs a detected target")
    log = events if events is not None else []
    out = PlanOutcome(FAIL, events=log)
    target = world.target_id
    width = cfg.initial_width

    def record(action, **kw):
        kw.setdefault("known", sorted(world.known))
        kw.setdefault("param", width)
        log.append(Event(len(log), "retrieve", action, **kw))

    def current_plan():
        path = hand_path(world.objects[target].center, w, resolution)
        if path is None:
            return None
        others = [o for o in world.known_objects() if o.id != target]
        order = [o.id for o in swept_objects(path, width, others)] + [target]
        # objects that failed since the scene last changed would fail again
        return [i for i in order if i not in failed] + [i for i in order if i in failed]

    failed: set[int] = set()
    plan = current_plan()
    record("plan", plan=plan)
    if plan is None:
        out.reason = "no end-effector path"
        record("fail", reason=out.reason)
        return out

    while not world.target_removed:
        if _expired(deadline):
            out.reason = TIMEOUT
            record("fail", reason=out.reason)
            return out
        o = plan[0]
        try:
            ok = bool(oracle.query(o, world, w))
        except Exception as exc:
            out.reason = f"oracle error: {exc!r}"
            record("fail", object=o, reason=out.reason)
            return out
        revealed = []
        if ok:
            world.remove(o)
            out.relocated.append(o)
            if o == target:
                record("remove", object=o, verdict=True)
                break
            failed.clear()
            revealed = world.sense()
            action = "remove"
            plan = current_plan()
        else:
            failed.add(o)
            out.replans += 1
            action = "widen"
            width = round(width + cfg.width_increment, 12)
            reason = None
            if cfg.max_width is not None and width > cfg.max_width + 1e-12:
                reason = "band exceeded max width"
            elif set(plan) <= failed and len(plan) == len(world.known):
                # every known object is in the band and failed since the last
                # change; a deterministic oracle would repeat itself forever
                reason = "no feasible object in band"
            if reason is not None:
                out.reason = reason
                record(action, object=o, verdict=False)
                record("fail", reason=out.reason)
                return out
            plan = current_plan()
        record(action, object=o, verdict=ok, revealed=revealed, plan=plan)
        if plan is None:
            out.reason = "no end-effector path"
            record("fail", reason=out.reason)
            return out

    out.status = DONE
    record("done")
    return out


def _angle_diff(a: float, b: float) -> float:
    d = (a - b + math.pi) % (2 * math.pi) - math.pi
    return abs(d)


class _VfhScene:
    """Accessibility and blocker queries over the robot's current belief."""

    def __init__(self, world: WorldState, w: Workspace, resolution: float, failed: frozenset[int] = frozenset()):
        self.w = w
        self.failed = failed
        self.objs = {o.id: o for o in world.known_objects()}
        self.grid = occupancy_grid(w, resolution)
        self.home = w.robot_home
        self._fields: dict[float, ObstacleField] = {}
        self._access: dict[int, bool] = {}

    def grasp_radius(self, o: ObjectSpec) -> float:
        return o.radius + self.w.robot_radius + self.w.safety_margin

    def accessible(self, oid: int) -> bool:
        if oid in self.failed:
            return False
        if oid not in self._access:
            o = self.objs[oid]
            r = self.grasp_radius(o)
            if r not in self._fields:
                self._fields[r] = ObstacleField(self.grid, r, {i: b.disc for i, b in self.objs.items()})
            f = self._fields[r]
            free = f.free_mask(exclude=(oid,))
            self._access[oid] = cells_connected(free, self.grid.cell_of(self.home), self.grid.cell_of(o.center))
        return self._access[oid]

    def blockers(self, goal: ObjectSpec, window_deg: float, skip: set[int]) -> list[ObjectSpec]:
        hx, hy = self.home
        bearing = math.atan2(goal.y - hy, goal.x - hx)
        reach = math.hypot(goal.x - hx, goal.y - hy) + self.grasp_radius(goal)
        half = math.radians(window_deg) / 2
        seg = (self.home, goal.center)
        found = []
        for o in self.objs.values():
            if o.id == goal.id or o.id in skip:
                continue
            d = math.hypot(o.x - hx, o.y - hy)
            if d - o.radius > reach:
                continue
            if _angle_diff(math.atan2(o.y - hy, o.x - hx), bearing) <= half + 1e-12:
                found.append((point_segment_distance(o.center, seg), o.id, o))
        found.sort(key=lambda t: (t[0], t[1]))
        return [o for _, _, o in found]

    def select(self, goal_id: int, window_deg: float, visited: set[int] | None = None) -> int | None:
        """Object to relocate next on the way to ``goal_id``, or None.

        Depth-first through inaccessible blockers; each object is expanded at
        most once per call.
        """
        if self.accessible(goal_id):
            return goal_id
        visited = set() if visited is None else visited
        visited.add(goal_id)
        blockers = self.blockers(self.objs[goal_id], window_deg, visited)
        acc = [b for b in blockers if self.accessible(b.id)]
        if acc:
            return min(acc, key=lambda b: (math.hypot(b.x - self.home[0], b.y - self.home[1]), b.id)).id
        for b in blockers:
            if b.id in visited:
                continue
            found = self.select(b.id, window_deg, visited)
            if found is not None:
                return found
        return None


def vfh_local_planner(
    world: WorldState,
    oracle: MotionOracle,
    w: Workspace,
    cfg: VfhConfig = VfhConfig(),
    resolution: float = DEFAULT_RESOLUTION,
    deadline: float | None = None,
    events: list[Event] | None = None,
) -> PlanOutcome:
    if not world.target_detected:
        raise ValueError("vfh_local_planner needs a detected target")
    log = events if events is not None else []
    out = PlanOutcome(FAIL, events=log)
    target = world.target_id
    window = cfg.initial_angle

    def record(action, **kw):
        kw.setdefault("known", sorted(world.known))
        kw.setdefault("param", window)
        log.append(Event(len(log), "retrieve", action, **kw))

    failed: set[int] = set()

    def choose():
        return _VfhScene(world, w, resolution, frozenset(failed)).select(target, window)

    o = choose()
    record("plan", plan=None if o is None else [o])
    while not world.target_removed:
        if o is None:
            out.reason = "no accessible blocker"
            record("fail", reason=out.reason)
            return out
        if _expired(deadline):
            out.reason = TIMEOUT
            record("fail", reason=out.reason)
            return out
        try:
            ok = bool(oracle.query(o, world, w))
        except Exception as exc:
            out.reason = f"oracle error: {exc!r}"
            record("fail", object=o, reason=out.reason)
            return out
        revealed = []
        if ok:
            world.remove(o)
            out.relocated.append(o)
            if o == target:
                record("remove", object=o, verdict=True)
                break
            failed.clear()
            revealed = world.sense()
            action = "remove"
        else:
            failed.add(o)
            out.replans += 1
            action = "widen"
            if window >= cfg.max_angle:
                out.reason = "angular window exhausted"
                record(action, object=o, verdict=False)
                record("fail", reason=out.reason)
                return out
            window = min(window + cfg.angle_increment, cfg.max_angle)
        queried = o
        o = choose()
        record(action, object=queried, verdict=ok, revealed=revealed, plan=None if o is None else [o])

    out.status = DONE
    record("done")
    return out
