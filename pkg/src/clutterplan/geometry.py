"""Planar primitives: cylinder footprints, the shelf workspace, distance queries.

All lengths are meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Point = tuple[float, float]
Segment = tuple[Point, Point]


class ConfigurationError(ValueError):
    """Raised for geometrically meaningless setups (bad resolution, camera placement)."""


class SceneError(ValueError):
    """Raised when a set of objects violates the scene invariants."""


@dataclass(frozen=True)
class Disc:
    x: float
    y: float
    radius: float

    @property
    def center(self) -> Point:
        return (self.x, self.y)


@dataclass(frozen=True)
class ObjectSpec:
    """A cylinder standing on the shelf floor."""

    id: int
    x: float
    y: float
    radius: float
    height: float
    is_target: bool = False
    hidden: bool = False

    def __post_init__(self):
        if not self.radius > 0:
            raise SceneError(f"object {self.id}: radius must be positive, got {self.radius}")
        if not self.height > 0:
            raise SceneError(f"object {self.id}: height must be positive, got {self.height}")

    @property
    def center(self) -> Point:
        return (self.x, self.y)

    @property
    def disc(self) -> Disc:
        return Disc(self.x, self.y, self.radius)


@dataclass(frozen=True)
class Workspace:
    """Rectangular shelf ``[0, length] x [0, width]``.

    Walls close the left, back and right sides; the edge ``y = 0`` is open and
    faces the robot. The strip ``-approach_depth <= y < 0`` in front of the shelf
    is free space the end-effector moves through; relocated objects are dropped
    there (the disposal zone) and the robot home pose sits inside it.
    """

    length: float = 0.9
    width: float = 0.45
    robot_radius: float = 0.05
    safety_margin: float = 0.005
    approach_depth: float = 0.2
    robot_home: Point = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.length <= 0 or self.width <= 0:
            raise ConfigurationError("workspace extent must be positive")
        if self.approach_depth <= 0:
            raise ConfigurationError("approach_depth must be positive")
        if self.robot_home is None:
            object.__setattr__(self, "robot_home", (self.length / 2, -self.approach_depth / 2))
        else:
            object.__setattr__(self, "robot_home", (float(self.robot_home[0]), float(self.robot_home[1])))
        hx, hy = self.robot_home
        if not (hy < 0 and hy >= -self.approach_depth and 0 <= hx <= self.length):
            raise ConfigurationError("robot_home must lie in the approach strip in front of the open edge")

    @property
    def walls(self) -> tuple[Segment, ...]:
        L, W = self.length, self.width
        return (((0.0, 0.0), (0.0, W)), ((0.0, W), (L, W)), ((L, W), (L, 0.0)))

    @property
    def open_edge(self) -> Segment:
        return ((0.0, 0.0), (self.length, 0.0))

    @property
    def disposal_zone(self) -> Point:
        return self.robot_home

    @property
    def domain(self) -> tuple[float, float, float, float]:
        """Bounding box (xmin, ymin, xmax, ymax) of everything the end-effector may visit."""
        return (0.0, -self.approach_depth, self.length, self.width)


def grasped_radius(object_radius: float, robot_radius: float, safety_margin: float = 0.0) -> float:
    """Footprint radius of the end-effector while holding an object."""
    return object_radius + robot_radius + safety_margin


def disc_overlaps(a: Disc, b: Disc) -> bool:
    # tangency is not overlap
    return math.hypot(a.x - b.x, a.y - b.y) < a.radius + b.radius


def point_segment_distance(p: Point, seg: Segment) -> float:
    (ax, ay), (bx, by) = seg
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / denom
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def points_segment_distance(px: np.ndarray, py: np.ndarray, seg: Segment) -> np.ndarray:
    """Vectorized point-to-segment distance for coordinate arrays of equal shape."""
    (ax, ay), (bx, by) = seg
    dx, dy = bx - ax, by - ay
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return np.hypot(px - ax, py - ay)
    t = np.clip(((px - ax) * dx + (py - ay) * dy) / denom, 0.0, 1.0)
    return np.hypot(px - (ax + t * dx), py - (ay + t * dy))


def segment_disc_clearance(seg: Segment, d: Disc) -> float:
    """Distance from the segment to the disc boundary; negative when they intersect."""
    return point_segment_distance(d.center, seg) - d.radius


def wall_clearance(p: Point, w: Workspace) -> float:
    return min(point_segment_distance(p, s) for s in w.walls)


def disc_in_workspace(d: Disc, w: Workspace) -> bool:
    return (
        d.x - d.radius >= 0.0
        and d.x + d.radius <= w.length
        and d.y - d.radius >= 0.0
        and d.y + d.radius <= w.width
    )


def validate_scene(objects: Sequence[ObjectSpec], w: Workspace, require_target: bool = True) -> None:
    """Check the scene invariants, raising :class:`SceneError` on the first violation."""
    ids = [o.id for o in objects]
    if len(set(ids)) != len(ids):
        raise SceneError("duplicate object ids")
    n_targets = sum(o.is_target for o in objects)
    if require_target and n_targets != 1:
        raise SceneError(f"expected exactly one target, found {n_targets}")
    if n_targets > 1:
        raise SceneError(f"expected at most one target, found {n_targets}")
    for o in objects:
        if not disc_in_workspace(o.disc, w):
            raise SceneError(f"object {o.id} is not inside the workspace")
    for i, a in enumerate(objects):
        for b in objects[i + 1:]:
            if disc_overlaps(a.disc, b.disc):
                raise SceneError(f"objects {a.id} and {b.id} overlap")


def path_length(points: Iterable[Point]) -> float:
    """Euclidean length of a polyline, summed front to back."""
    total = 0.0
    prev = None
    for p in points:
        if prev is not None:
            total += math.hypot(p[0] - prev[0], p[1] - prev[1])
        prev = p
    return total
