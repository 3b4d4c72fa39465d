"""Static SVG drawings of a shelf scene, its T-graph and the planned path.

Output is a pure function of the inputs (fixed number formatting, sorted
iteration), so the same scene always renders to the same bytes.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from shapely.geometry import Polygon

from .events import Event
from .geometry import ObjectSpec, Point, Workspace
from .occlusion import CameraModel, shadow_region
from .planner import reloc_path
from .tgraph import ROBOT, TGraph, gen_graph
from .world import WorldState

SCALE = 1000.0  # px per meter
MARGIN = 20.0

COLORS = {
    "shelf": "#f7f4ee",
    "wall": "#444444",
    "shadow": "#9aa7b8",
    "object": "#c9c9c9",
    "target": "#d9534f",
    "edge": "#5b8def",
    "path": "#f0a202",
    "robot": "#2e7d32",
}


def _f(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, w: Workspace):
        self.w = w
        x0, y0, x1, y1 = w.domain
        self.x0, self.y1 = x0, y1
        self.width = (x1 - x0) * SCALE + 2 * MARGIN
        self.height = (y1 - y0) * SCALE + 2 * MARGIN
        self.parts: list[str] = []

    def pt(self, p: Point) -> tuple[str, str]:
        # shelf back wall at the top, robot at the bottom
        return _f(MARGIN + (p[0] - self.x0) * SCALE), _f(MARGIN + (self.y1 - p[1]) * SCALE)

    def add(self, s: str) -> None:
        self.parts.append(s)

    def line(self, a: Point, b: Point, color: str, width: float, extra: str = "") -> None:
        (ax, ay), (bx, by) = self.pt(a), self.pt(b)
        self.add(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="{color}" stroke-width="{_f(width)}"{extra}/>')

    def circle(self, c: Point, r: float, fill: str, extra: str = "") -> None:
        cx, cy = self.pt(c)
        self.add(f'<circle cx="{cx}" cy="{cy}" r="{_f(r * SCALE)}" fill="{fill}"{extra}/>')

    def text(self, p: Point, s: str, size: float = 11.0) -> None:
        x, y = self.pt(p)
        self.add(
            f'<text x="{x}" y="{y}" font-size="{_f(size)}" font-family="monospace" '
            f'text-anchor="middle" dominant-baseline="central">{s}</text>'
        )

    def polygon(self, poly: Polygon, fill: str, opacity: float) -> None:
        rings = [poly.exterior, *poly.interiors]
        d = []
        for ring in rings:
            coords = [self.pt(p) for p in ring.coords[:-1]]
            d.append("M" + " L".join(f"{x} {y}" for x, y in coords) + " Z")
        self.add(f'<path d="{" ".join(d)}" fill="{fill}" fill-opacity="{_f(opacity)}" fill-rule="evenodd"/>')

    def svg(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(self.width)}" height="{_f(self.height)}" '
            f'viewBox="0 0 {_f(self.width)} {_f(self.height)}">'
        )
        return "\n".join([head, *self.parts, "</svg>"]) + "\n"


def _polygons(geom) -> Iterable[Polygon]:
    if geom.is_empty:
        return []
    if isinstance(geom, Polygon):
        return [geom]
    return [g for g in getattr(geom, "geoms", []) if isinstance(g, Polygon)]


def render_scene(
    objects: Sequence[ObjectSpec],
    w: Workspace,
    camera: CameraModel | None = None,
    graph: TGraph | None = None,
    path: Sequence[int] | None = None,
    known: set[int] | None = None,
    title: str | None = None,
) -> str:
    """SVG of the shelf.

    Shadows are cast by every object when ``camera`` is given. Objects outside
    ``known`` (the robot's belief) are drawn dashed. ``path`` is a node
    sequence starting at the robot node and is drawn over the graph edges.
    """
    c = _Canvas(w)
    objects = sorted(objects, key=lambda o: o.id)
    known = {o.id for o in objects} if known is None else known

    c.add(f'<rect x="0" y="0" width="{_f(c.width)}" height="{_f(c.height)}" fill="white"/>')
    (sx, sy), (ex, ey) = c.pt((0.0, w.width)), c.pt((w.length, 0.0))
    c.add(
        f'<rect x="{sx}" y="{sy}" width="{_f(float(ex) - float(sx))}" height="{_f(float(ey) - float(sy))}" '
        f'fill="{COLORS["shelf"]}"/>'
    )
    if camera is not None and objects:
        for poly in _polygons(shadow_region(objects, camera, w).geometry):
            c.polygon(poly, COLORS["shadow"], 0.5)
    for a, b in w.walls:
        c.line(a, b, COLORS["wall"], 4.0)

    if graph is not None:
        for a, b in sorted(graph.edges):
            c.line(graph.node_poses[a], graph.node_poses[b], COLORS["edge"], 1.5, ' stroke-opacity="0.7"')
    if path:
        poses = graph.node_poses if graph is not None else {ROBOT: w.robot_home, **{o.id: o.center for o in objects}}
        for a, b in zip(path, path[1:]):
            c.line(poses[a], poses[b], COLORS["path"], 4.0, ' stroke-linecap="round"')

    for o in objects:
        fill = COLORS["target"] if o.is_target else COLORS["object"]
        dash = "" if o.id in known else ' stroke-dasharray="4 3" fill-opacity="0.35"'
        c.circle(o.center, o.radius, fill, f' stroke="#333333" stroke-width="1.00"{dash}')
        c.text(o.center, str(o.id))
    c.circle(w.robot_home, w.robot_radius, COLORS["robot"], ' fill-opacity="0.35"')
    c.text(w.robot_home, "R")
    if title:
        c.add(f'<text x="{_f(MARGIN)}" y="{_f(MARGIN / 2 + 4)}" font-size="12.00" font-family="monospace">{title}</text>')
    return c.svg()


def render_world(world: WorldState, with_graph: bool = True, resolution: float | None = None, title: str | None = None) -> str:
    """Scene, shadows, T-graph over the known objects and the current min-hop path."""
    graph = path = None
    if with_graph and world.target_detected:
        kw = {} if resolution is None else {"resolution": resolution}
        graph = gen_graph(world.known_objects(), world.workspace, **kw)
        plan = reloc_path(graph, world.target_id)
        path = list(plan.source_path) if plan else None
    return render_scene(
        list(world.objects.values()), world.workspace, world.camera, graph, path, world.known, title
    )


def render_frames(
    world: WorldState,
    events: Sequence[Event],
    with_graph: bool = True,
    resolution: float | None = None,
) -> list[str]:
    """One frame for the initial scene, then one after every removal in the log."""
    w = world.copy()
    frames = [render_world(w, with_graph, resolution, title="step 0")]
    for e in events:
        if e.action == "remove" and e.object is not None:
            w.remove(e.object)
            if w.target_removed:
                break
            w.sense()
            frames.append(render_world(w, with_graph, resolution, title=f"step {e.step}: removed {e.object}"))
    return frames


def edges_drawn(svg: str) -> int:
    return svg.count(f'stroke="{COLORS["edge"]}"')

