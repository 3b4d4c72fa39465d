"""Traversability graph over the known objects plus the robot node.

An edge (i, j) says the end-effector holding the largest known object can
slide between the poses of objects i and j with every other object and the
walls in place. Edges at the robot node connect its home pose the same way.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, Sequence

from .corridor import DEFAULT_RESOLUTION, ObstacleField, occupancy_grid
from .geometry import ObjectSpec, Point, Workspace

log = logging.getLogger(__name__)

ROBOT = -1


def node_label(v: int) -> str:
    return "R" if v == ROBOT else str(v)


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class TGraph:
    """Immutable, unweighted, undirected graph; nodes are object ids and ``ROBOT``."""

    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    node_poses: Mapping[int, Point]
    grasp_radius: float
    objects: Mapping[int, ObjectSpec] = field(default_factory=dict)
    target: int | None = None

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, a: int, b: int) -> bool:
        return _edge(a, b) in self.edges

    def __contains__(self, v: int) -> bool:
        return v in self.node_poses

    def dump(self) -> str:
        """Adjacency list text: one line per node, the node then its sorted neighbors."""
        lines = []
        for v in self.nodes:
            lines.append(" ".join([node_label(v)] + [node_label(u) for u in self.adjacency[v]]))
        return "\n".join(lines) + "\n"


def gen_graph(
    objects: Sequence[ObjectSpec],
    w: Workspace,
    resolution: float = DEFAULT_RESOLUTION,
) -> TGraph:
    """Build the T-graph for ``objects`` (the robot's current belief of the scene)."""
    objs = {o.id: o for o in objects}
    r_max = max((o.radius for o in objects), default=0.0)
    r_g = r_max + w.robot_radius + w.safety_margin
    poses: dict[int, Point] = {ROBOT: w.robot_home}
    poses.update({i: o.center for i, o in objs.items()})
    nodes = tuple(sorted(poses))

    grid = occupancy_grid(w, resolution)
    field_ = ObstacleField(grid, r_g, {i: o.disc for i, o in objs.items()})
    edges = set()
    for a, b in itertools.combinations(nodes, 2):
        if field_.connected(poses[a], poses[b], exclude=(a, b)):
            edges.add((a, b))

    target = next((o.id for o in objects if o.is_target), None)
    return TGraph(nodes, frozenset(edges), poses, r_g, objs, target)


def accessible_objects(g: TGraph) -> tuple[list[ObjectSpec], set[int]]:
    """Objects whose node shares an edge with the robot node."""
    nodes = set(g.neighbors(ROBOT)) if ROBOT in g else set()
    return [g.objects[v] for v in sorted(nodes) if v in g.objects], nodes


def remove_edge(g: TGraph, a: int, b: int) -> TGraph:
    """Copy of ``g`` without edge (a, b); a missing edge is a logged no-op."""
    e = _edge(a, b)
    if e not in g.edges:
        log.warning("remove_edge: no edge (%s, %s); graph unchanged", node_label(a), node_label(b))
        return g
    return replace(g, edges=g.edges - {e})
