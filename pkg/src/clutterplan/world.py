from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .geometry import ObjectSpec, SceneError, Workspace
from .occlusion import CameraModel, detected_objects

CASES = ("I", "II", "III")


class HiddenObjectError(RuntimeError):
    pass


@dataclass
class WorldState:
    """Ground truth of the shelf plus what the robot has seen of it.

    ``objects`` holds the objects still on the shelf. ``known`` is the set of
    ids the robot has detected so far; in Case I everything is known from the
    start. Relocated ids are appended to ``removed``.
    """

    objects: dict[int, ObjectSpec]
    workspace: Workspace
    camera: CameraModel = field(default_factory=CameraModel)
    case: str = "I"
    known: set[int] = field(default_factory=set)
    removed: list[int] = field(default_factory=list)
    target_id: int = field(init=False)

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case!r}")
        targets = [o.id for o in self.objects.values() if o.is_target]
        if len(targets) != 1:
            raise SceneError(f"expected exactly one target, found {len(targets)}")
        self.target_id = targets[0]
        if not self.known:
            self.sense()

    @classmethod
    def from_objects(cls, objects, workspace, camera=None, case="I") -> "WorldState":
        return cls({o.id: o for o in objects}, workspace, camera or CameraModel(), case)

    @property
    def target(self) -> ObjectSpec:
        return self.objects[self.target_id]

    @property
    def target_detected(self) -> bool:
        return self.target_id in self.known

    @property
    def target_removed(self) -> bool:
        return self.target_id in self.removed

    def known_objects(self) -> list[ObjectSpec]:
        return [self.objects[i] for i in sorted(self.known)]

    def sense(self) -> list[int]:
        """Update ``known`` from the camera; returns newly revealed ids, sorted."""
        if self.case == "I":
            visible = set(self.objects)
        else:
            visible = detected_objects(list(self.objects.values()), self.camera, self.workspace)
        new = sorted(visible - self.known)
        self.known |= visible
        return new

    def remove(self, oid: int) -> None:
        if oid not in self.known:
            raise HiddenObjectError(f"object {oid} is not known to the robot")
        del self.objects[oid]
        self.known.discard(oid)
        self.removed.append(oid)

    def copy(self) -> "WorldState":
        return copy.deepcopy(self)
