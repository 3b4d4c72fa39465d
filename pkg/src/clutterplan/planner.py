"""Relocation planning on the traversability graph.

``reloc_path`` turns a graph into the shortest removal sequence,
``base_planner`` executes it against a motion oracle with online replanning,
and ``reloc_planner`` first searches for a hidden target by removing the
object that uncovers the most occluded volume.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field

from .corridor import DEFAULT_RESOLUTION
from .events import Event
from .geometry import Workspace
from .motion import MotionOracle
from .occlusion import revealed_volumes
from .tgraph import ROBOT, TGraph, accessible_objects, gen_graph, remove_edge
from .world import WorldState

DONE = "Done"
FAIL = "Fail"
TIMEOUT = "timeout"


@dataclass(frozen=True)
class RelocationPlan:
    """Objects to relocate, first to last; the target comes last."""

    order: tuple[int, ...]
    source_path: tuple[int, ...]
    length: float = 0.0

    @property
    def k(self) -> int:
        return len(self.order)


@dataclass
class PlanOutcome:
    status: str
    relocated: list[int] = field(default_factory=list)
    replans: int = 0
    reason: str | None = None
    events: list[Event] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.status == DONE

    @property
    def timed_out(self) -> bool:
        return self.status == FAIL and self.reason == TIMEOUT


def reloc_path(g: TGraph, target: int, robot: int = ROBOT) -> RelocationPlan | None:
    """Min-hop path from ``robot`` to ``target``.

    Among equal-hop paths the one with the shortest Euclidean length over the
    node poses wins; remaining ties go to the lexicographically smallest node
    sequence. Returns None when the target is unreachable.
    """
    if target not in g:
        raise KeyError(target)
    if robot not in g:
        raise KeyError(robot)
    dist = {robot: 0}
    order = [robot]
    queue = deque([robot])
    while queue:
        u = queue.popleft()
        if u == target:
            break
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                order.append(v)
                queue.append(v)
    if target not in dist:
        return None

    hops = dist[target]
    poses = g.node_poses
    # best (length, node sequence) from the robot to each node, layer by layer
    best: dict[int, tuple[float, tuple[int, ...]]] = {robot: (0.0, (robot,))}
    for v in order[1:]:
        if dist[v] > hops:
            break
        pv = poses[v]
        cands = []
        for u in g.neighbors(v):
            if dist.get(u) == dist[v] - 1 and u in best:
                pu = poses[u]
                length, seq = best[u]
                cands.append((length + math.hypot(pv[0] - pu[0], pv[1] - pu[1]), seq + (v,)))
        best[v] = min(cands)
    length, seq = best[target]
    return RelocationPlan(order=seq[1:], source_path=seq, length=length)


def _expired(deadline: float | None) -> bool:
    return deadline is not None and time.monotonic() > deadline


def base_planner(
    world: WorldState,
    oracle: MotionOracle,
    w: Workspace,
    resolution: float = DEFAULT_RESOLUTION,
    deadline: float | None = None,
    events: list[Event] | None = None,
) -> PlanOutcome:
    """Retrieve a detected target, replanning on motion failures and reveals.

    ``world`` is mutated: relocated objects leave it. ``deadline`` is a
    ``time.monotonic()`` instant after which the run gives up.
    """
    if not world.target_detected:
        raise ValueError("base_planner needs a detected target")
    log = events if events is not None else []
    out = PlanOutcome(FAIL, events=log)
    target = world.target_id

    def record(action, **kw):
        kw.setdefault("known", sorted(world.known))
        log.append(Event(len(log), "retrieve", action, **kw))

    g = gen_graph(world.known_objects(), w, resolution)
    plan = reloc_path(g, target)
    record("plan", nodes=len(g.nodes), edges=len(g.edges), plan=list(plan.order) if plan else None)
    if plan is None:
        out.reason = "no path to target"
        record("fail", reason=out.reason)
        return out

    while not world.target_removed:
        if _expired(deadline):
            out.reason = TIMEOUT
            record("fail", reason=out.reason)
            return out
        o = plan.order[0]
        try:
            ok = bool(oracle.query(o, world, w))
        except Exception as exc:  # oracle faults end the run, they do not crash it
            out.reason = f"oracle error: {exc!r}"
            record("fail", object=o, reason=out.reason)
            return out

        if ok:
            world.remove(o)
            out.relocated.append(o)
            if o == target:
                record("remove", object=o, verdict=True)
                break
            revealed = world.sense()
            g = gen_graph(world.known_objects(), w, resolution)
            rebuild = "reveal" if revealed else "removal"
            if revealed:
                out.replans += 1
            action = "remove"
        else:
            revealed = []
            rebuild = None
            g = remove_edge(g, ROBOT, o)
            out.replans += 1
            action = "remove_edge"

        plan = reloc_path(g, target)
        record(
            action,
            object=o,
            verdict=ok,
            revealed=revealed,
            rebuild=rebuild,
            nodes=len(g.nodes),
            edges=len(g.edges),
            plan=list(plan.order) if plan else None,
        )
        if plan is None:
            out.reason = "no path to target"
            record("fail", reason=out.reason)
            return out

    out.status = DONE
    record("done")
    return out


def reloc_planner(
    world: WorldState,
    oracle: MotionOracle,
    w: Workspace,
    resolution: float = DEFAULT_RESOLUTION,
    deadline: float | None = None,
    events: list[Event] | None = None,
) -> PlanOutcome:
    """Search for an undetected target, then hand over to :func:`base_planner`.

    While the target is unseen, each round rebuilds the graph over the known
    objects, scores every accessible object by the occluded volume its removal
    would reveal, and tries them best-first until one is feasible. Scores are
    computed once per round.
    """
    log = events if events is not None else []
    search = PlanOutcome(FAIL, events=log)

    def record(action, **kw):
        kw.setdefault("known", sorted(world.known))
        log.append(Event(len(log), "search", action, **kw))

    while not world.target_detected:
        if _expired(deadline):
            search.reason = TIMEOUT
            record("fail", reason=search.reason)
            return search
        known = world.known_objects()
        g = gen_graph(known, w, resolution)
        accessible, _ = accessible_objects(g)
        m = revealed_volumes([o.id for o in accessible], known, world.camera, w)
        candidates = sorted(m, key=lambda i: (-m[i], i))
        record(
            "plan",
            nodes=len(g.nodes),
            edges=len(g.edges),
            plan=list(candidates),
            metrics=[[i, m[i]] for i in sorted(m)],
        )
        removed = False
        while candidates:
            o = candidates[0]
            try:
                ok = bool(oracle.query(o, world, w))
            except Exception as exc:
                search.reason = f"oracle error: {exc!r}"
                record("fail", object=o, reason=search.reason)
                return search
            if ok:
                world.remove(o)
                search.relocated.append(o)
                revealed = world.sense()
                record("remove", object=o, verdict=True, revealed=revealed)
                removed = True
                break
            candidates.pop(0)
            record("drop", object=o, verdict=False, plan=list(candidates))
        if not removed:
            search.reason = "no feasible accessible object"
            record("fail", reason=search.reason)
            return search

    out = base_planner(world, oracle, w, resolution, deadline, events=log)
    out.relocated = search.relocated + out.relocated
    return out
