"""Scenario files: JSON with every length in centimeters.

Lengths are converted to meters once, on load. A minimal file::

    {
      "case": "I",
      "workspace": {"length": 90, "width": 45},
      "camera": {"x": 45, "y": -30, "h": 30},
      "objects": [
        {"id": 0, "x": 45, "y": 20, "radius": 2.75, "height": 6.5, "target": true}
      ]
    }

Omitted workspace and camera fields take the library defaults.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .geometry import ObjectSpec, SceneError, Workspace, validate_scene
from .occlusion import CameraModel, check_camera
from .world import CASES, WorldState

CM = 0.01

_WORKSPACE_LENGTHS = ("length", "width", "robot_radius", "safety_margin", "approach_depth")


class ScenarioError(ValueError):
    pass


def _m(v: Any, what: str) -> float:
    try:
        f = float(v)
    except (TypeError, ValueError):
        raise ScenarioError(f"{what}: expected a number, got {v!r}") from None
    if not math.isfinite(f):
        raise ScenarioError(f"{what}: not finite")
    return f * CM


def _cm(v: float) -> float:
    # keep files readable: 0.45 m -> 45.0, not 45.00000000000001
    return round(v / CM, 9)


def world_from_dict(data: dict) -> WorldState:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    case = data.get("case", "I")
    if case not in CASES:
        raise ScenarioError(f"unknown case {case!r}")

    wd = data.get("workspace", {})
    kw: dict[str, Any] = {k: _m(wd[k], f"workspace.{k}") for k in _WORKSPACE_LENGTHS if k in wd}
    if "robot_home" in wd:
        hx, hy = wd["robot_home"]
        kw["robot_home"] = (_m(hx, "robot_home"), _m(hy, "robot_home"))
    unknown = set(wd) - set(_WORKSPACE_LENGTHS) - {"robot_home"}
    if unknown:
        raise ScenarioError(f"unknown workspace fields: {sorted(unknown)}")
    try:
        w = Workspace(**kw)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None

    cd = data.get("camera", {})
    cam_kw: dict[str, Any] = {k: _m(cd[k], f"camera.{k}") for k in ("x", "y", "h") if k in cd}
    if "fov_deg" in cd:
        lo, hi = cd["fov_deg"]
        cam_kw["fov"] = (math.radians(float(lo)), math.radians(float(hi)))
    cam = CameraModel(**cam_kw)

    objects = []
    for i, od in enumerate(data.get("objects", [])):
        try:
            objects.append(ObjectSpec(
                int(od["id"]),
                _m(od["x"], f"objects[{i}].x"),
                _m(od["y"], f"objects[{i}].y"),
                _m(od["radius"], f"objects[{i}].radius"),
                _m(od["height"], f"objects[{i}].height"),
                is_target=bool(od.get("target", False)),
                hidden=bool(od.get("hidden", False)),
            ))
        except KeyError as exc:
            raise ScenarioError(f"objects[{i}]: missing field {exc.args[0]!r}") from None
    try:
        validate_scene(objects, w)
        check_camera(cam, w, objects)
    except (SceneError, ValueError) as exc:
        raise ScenarioError(str(exc)) from None
    return WorldState.from_objects(objects, w, cam, case)


def world_to_dict(world: WorldState) -> dict:
    w, cam = world.workspace, world.camera
    return {
        "case": world.case,
        "workspace": {
            **{k: _cm(getattr(w, k)) for k in _WORKSPACE_LENGTHS},
            "robot_home": [_cm(w.robot_home[0]), _cm(w.robot_home[1])],
        },
        "camera": {
            "x": _cm(cam.x),
            "y": _cm(cam.y),
            "h": _cm(cam.h),
            "fov_deg": [round(math.degrees(a), 9) for a in cam.fov],
        },
        "objects": [
            {
                "id": o.id,
                "x": _cm(o.x),
                "y": _cm(o.y),
                "radius": _cm(o.radius),
                "height": _cm(o.height),
                "target": o.is_target,
                "hidden": o.hidden,
            }
            for o in sorted(world.objects.values(), key=lambda o: o.id)
        ],
    }


def load_scenario(path: str | Path) -> WorldState:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from None
    return world_from_dict(data)


def save_scenario(world: WorldState, path: str | Path) -> None:
    Path(path).write_text(json.dumps(world_to_dict(world), indent=2) + "\n")
