"""Can a disc of a given radius travel between two poses?

Free space is rasterized on a square grid over the workspace plus the
approach strip in front of it. A cell is free when its center keeps at least
the moving radius of clearance from every wall and obstacle disc; two poses
are connected when 4-connected flood fill links their cells.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy import ndimage

from .geometry import ConfigurationError, Disc, Point, Workspace, points_segment_distance

DEFAULT_RESOLUTION = 0.005

_FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True)
class CorridorQuery:
    moving_radius: float
    start: Point
    goal: Point
    obstacles: tuple[Disc, ...]
    workspace: Workspace


class GridOccupancy:
    """Cell-center lattice over ``workspace.domain`` with a precomputed wall clearance field.

    Arrays are indexed ``[ix, iy]``.
    """

    def __init__(self, workspace: Workspace, resolution: float = DEFAULT_RESOLUTION):
        if not resolution > 0:
            raise ConfigurationError(f"grid resolution must be positive, got {resolution}")
        if resolution > min(workspace.length, workspace.width):
            raise ConfigurationError(
                f"grid resolution {resolution} exceeds the workspace extent "
                f"{workspace.length} x {workspace.width}"
            )
        self.workspace = workspace
        self.resolution = resolution
        xmin, ymin, xmax, ymax = workspace.domain
        self.origin = (xmin, ymin)
        self.nx = int(math.ceil((xmax - xmin) / resolution - 1e-9))
        self.ny = int(math.ceil((ymax - ymin) / resolution - 1e-9))
        self.xs = xmin + (np.arange(self.nx) + 0.5) * resolution
        self.ys = ymin + (np.arange(self.ny) + 0.5) * resolution
        self.X, self.Y = np.meshgrid(self.xs, self.ys, indexing="ij")
        clear = np.full(self.X.shape, np.inf)
        for seg in workspace.walls:
            np.minimum(clear, points_segment_distance(self.X, self.Y, seg), out=clear)
        self.wall_clearance = clear

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    def cell_of(self, p: Point) -> tuple[int, int] | None:
        i = int(math.floor((p[0] - self.origin[0]) / self.resolution))
        j = int(math.floor((p[1] - self.origin[1]) / self.resolution))
        if 0 <= i < self.nx and 0 <= j < self.ny:
            return (i, j)
        return None

    def disc_clearance(self, d: Disc) -> np.ndarray:
        return np.hypot(self.X - d.x, self.Y - d.y) - d.radius

    def free_mask(self, moving_radius: float, obstacles: Iterable[Disc]) -> np.ndarray:
        free = self.wall_clearance >= moving_radius
        for d in obstacles:
            free &= self.disc_clearance(d) >= moving_radius
        return free


@functools.lru_cache(maxsize=32)
def occupancy_grid(workspace: Workspace, resolution: float = DEFAULT_RESOLUTION) -> GridOccupancy:
    """Shared, memoized grid; the instance must be treated as read-only."""
    return GridOccupancy(workspace, resolution)


def cells_connected(free: np.ndarray, a: tuple[int, int] | None, b: tuple[int, int] | None) -> bool:
    if a is None or b is None or not free[a] or not free[b]:
        return False
    if a == b:
        return True
    labels, _ = ndimage.label(free, structure=_FOUR_CONNECTED)
    return bool(labels[a] == labels[b])


def corridor_exists(q: CorridorQuery, resolution: float = DEFAULT_RESOLUTION) -> bool:
    """True when a disc of ``q.moving_radius`` can slide from ``q.start`` to ``q.goal``.

    Endpoints whose cells are not free make the query infeasible (False), never an error.
    """
    grid = occupancy_grid(q.workspace, resolution)
    free = grid.free_mask(q.moving_radius, q.obstacles)
    return cells_connected(free, grid.cell_of(q.start), grid.cell_of(q.goal))


def point_accessible(
    p: Point,
    moving_radius: float,
    obstacles: Sequence[Disc],
    w: Workspace,
    resolution: float = DEFAULT_RESOLUTION,
) -> bool:
    """Can the end-effector reach ``p`` from the robot home pose?

    Any obstacle disc containing ``p`` is taken to be the object at ``p`` and ignored.
    """
    others = tuple(d for d in obstacles if math.hypot(d.x - p[0], d.y - p[1]) > d.radius)
    q = CorridorQuery(moving_radius, w.robot_home, p, others, w)
    return corridor_exists(q, resolution)


class ObstacleField:
    """Batched corridor checks for one moving radius over a fixed obstacle set.

    Each obstacle's blocked-cell mask is computed once; a query can then drop a
    few obstacles (the endpoint objects) without rebuilding the field.
    """

    def __init__(self, grid: GridOccupancy, moving_radius: float, obstacles: Mapping[Hashable, Disc]):
        self.grid = grid
        self.moving_radius = moving_radius
        self.base = grid.wall_clearance >= moving_radius
        self.blocked = {k: grid.disc_clearance(d) < moving_radius for k, d in obstacles.items()}
        count = np.zeros(grid.shape, dtype=np.int16)
        for m in self.blocked.values():
            count += m
        self.count = count

    def free_mask(self, exclude: Iterable[Hashable] = ()) -> np.ndarray:
        count = self.count
        for k in exclude:
            if k in self.blocked:
                count = count - self.blocked[k]
        return self.base & (count == 0)

    def connected(self, start: Point, goal: Point, exclude: Iterable[Hashable] = ()) -> bool:
        free = self.free_mask(exclude)
        return cells_connected(free, self.grid.cell_of(start), self.grid.cell_of(goal))
