"""Fixed-camera visibility in plan view: shadow wedges, detection, revealed volume.

A disc casts a shadow bounded by the two tangent rays from the camera's
planar position; the shadow starts behind the disc and is clipped to the
workspace. Occluded volume is the shadow area times a reference height (the
mean object height of the scene).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import shapely
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry import Polygon, box

from .geometry import ConfigurationError, ObjectSpec, Workspace

DISC_QUAD_SEGS = 64
BOUNDARY_SAMPLES = 360


@dataclass(frozen=True)
class CameraModel:
    x: float = 0.45
    y: float = -0.3
    h: float = 0.3
    fov: tuple[float, float] = (0.0, math.pi)

    @property
    def planar(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class ShadowRegion:
    geometry: shapely.Geometry
    area: float
    volume: float

    @property
    def is_empty(self) -> bool:
        return self.geometry.is_empty


def check_camera(cam: CameraModel, w: Workspace, objects: Sequence[ObjectSpec] = ()) -> None:
    if 0.0 <= cam.x <= w.length and 0.0 <= cam.y <= w.width:
        raise ConfigurationError("camera planar position lies inside the workspace")
    if objects and cam.h <= max(o.height for o in objects):
        raise ConfigurationError("camera must be mounted above the tallest object")


def reference_height(objects: Sequence[ObjectSpec]) -> float:
    if not objects:
        return 0.0
    return float(np.mean([o.height for o in objects]))


def wedge(o: ObjectSpec, cam: CameraModel, reach: float) -> shapely.Geometry:
    """Unclipped shadow of one disc, out to ``reach`` meters from the camera."""
    cx, cy = cam.planar
    d = math.hypot(o.x - cx, o.y - cy)
    if d <= o.radius:
        raise ConfigurationError(f"camera is inside object {o.id}")
    half = math.asin(o.radius / d)
    bearing = math.atan2(o.y - cy, o.x - cx)
    # far edge is a chord; push it out so the chord clears the workspace
    far = reach / math.cos(half)
    cone = Polygon([
        (cx, cy),
        (cx + far * math.cos(bearing - half), cy + far * math.sin(bearing - half)),
        (cx + far * math.cos(bearing + half), cy + far * math.sin(bearing + half)),
    ])
    disc = ShapelyPoint(o.x, o.y).buffer(o.radius, quad_segs=DISC_QUAD_SEGS)
    front = shapely.convex_hull(shapely.union(disc, ShapelyPoint(cx, cy)))
    return cone.difference(front)


def _reach(cam: CameraModel, w: Workspace) -> float:
    corners = [(0.0, 0.0), (w.length, 0.0), (0.0, w.width), (w.length, w.width)]
    return 2.0 * max(math.hypot(x - cam.x, y - cam.y) for x, y in corners)


def shadow_region(
    objects: Sequence[ObjectSpec],
    cam: CameraModel,
    w: Workspace,
    ref_height: float | None = None,
) -> ShadowRegion:
    """Union of all shadow wedges, clipped to the shelf.

    ``ref_height`` defaults to the mean height of ``objects``; pass it explicitly
    when comparing two object sets from the same scene.
    """
    check_camera(cam, w)
    if ref_height is None:
        ref_height = reference_height(objects)
    if not objects:
        return ShadowRegion(Polygon(), 0.0, 0.0)
    reach = _reach(cam, w)
    union = shapely.union_all([wedge(o, cam, reach) for o in objects])
    region = shapely.intersection(union, box(0.0, 0.0, w.length, w.width))
    area = float(region.area)
    return ShadowRegion(region, area, area * ref_height)


def _boundary_points(o: ObjectSpec, n: int) -> np.ndarray:
    t = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return np.column_stack([o.x + o.radius * np.cos(t), o.y + o.radius * np.sin(t)])


def sight_blocked(points: np.ndarray, cam: CameraModel, blockers: Sequence[ObjectSpec]) -> np.ndarray:
    """For each point, does the sight segment from the camera pass through a blocker's interior?"""
    blocked = np.zeros(len(points), dtype=bool)
    if not blockers:
        return blocked
    cx, cy = cam.planar
    dx = points[:, 0] - cx
    dy = points[:, 1] - cy
    seg2 = dx * dx + dy * dy
    for b in blockers:
        t = ((b.x - cx) * dx + (b.y - cy) * dy) / seg2
        t = np.clip(t, 0.0, 1.0)
        dist = np.hypot(cx + t * dx - b.x, cy + t * dy - b.y)
        blocked |= dist < b.radius
    return blocked


def _in_fov(points: np.ndarray, cam: CameraModel) -> np.ndarray:
    ang = np.arctan2(points[:, 1] - cam.y, points[:, 0] - cam.x)
    lo, hi = cam.fov
    return (ang >= lo) & (ang <= hi)


def detected_objects(
    objects: Sequence[ObjectSpec],
    cam: CameraModel,
    w: Workspace,
    samples: int = BOUNDARY_SAMPLES,
) -> set[int]:
    """Ids of objects with at least one boundary sample visible from the camera."""
    check_camera(cam, w)
    found = set()
    for o in objects:
        pts = _boundary_points(o, samples)
        others = [b for b in objects if b.id != o.id]
        visible = _in_fov(pts, cam) & ~sight_blocked(pts, cam, others)
        if visible.any():
            found.add(o.id)
    return found


def revealed_volume(
    obj_id: int,
    objects: Sequence[ObjectSpec],
    cam: CameraModel,
    w: Workspace,
    ref_height: float | None = None,
) -> float:
    """Decrease in occluded volume if ``obj_id`` were taken out of the scene."""
    rest = [o for o in objects if o.id != obj_id]
    if len(rest) == len(objects):
        raise KeyError(obj_id)
    if ref_height is None:
        ref_height = reference_height(objects)
    full = shadow_region(objects, cam, w, ref_height)
    without = shadow_region(rest, cam, w, ref_height)
    return max(0.0, full.volume - without.volume)


def revealed_volumes(
    ids: Sequence[int],
    objects: Sequence[ObjectSpec],
    cam: CameraModel,
    w: Workspace,
) -> dict[int, float]:
    """:func:`revealed_volume` for several objects, sharing the full-scene shadow."""
    ref = reference_height(objects)
    full = shadow_region(objects, cam, w, ref).volume
    present = {o.id for o in objects}
    out = {}
    for i in ids:
        if i not in present:
            raise KeyError(i)
        rest = [o for o in objects if o.id != i]
        out[i] = max(0.0, full - shadow_region(rest, cam, w, ref).volume)
    return out
