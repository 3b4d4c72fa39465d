"""Planner event records and their newline-delimited JSON encoding.

Every planner (proposed and baselines) emits the same record shape so one
pipeline can consume all of them. Field order is fixed; logs contain no
timing so identical runs give byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence


@dataclass
class Event:
    step: int
    phase: str  # "search" | "retrieve"
    action: str  # plan | remove | remove_edge | drop | widen | done | fail
    object: int | None = None
    verdict: bool | None = None
    revealed: list[int] | None = None
    rebuild: str | None = None  # "removal" | "reveal" | None
    nodes: int | None = None
    edges: int | None = None
    plan: list[int] | None = None
    known: list[int] | None = None
    param: float | None = None
    metrics: list[list[float]] | None = None
    reason: str | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "Event":
        data = json.loads(line)
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


def dumps(events: Iterable[Event]) -> str:
    return "".join(e.to_json() + "\n" for e in events)


def loads(text: str) -> list[Event]:
    return [Event.from_json(line) for line in text.splitlines() if line.strip()]


def write_log(events: Iterable[Event], path: str | Path) -> None:
    Path(path).write_text(dumps(events))


def read_log(path: str | Path) -> list[Event]:
    return loads(Path(path).read_text())


def relocated_from_log(events: Iterable[Event]) -> list[int]:
    return [e.object for e in events if e.action == "remove"]


def outcome_from_log(events: Sequence[Event]) -> str | None:
    for e in reversed(list(events)):
        if e.action in ("done", "fail"):
            return e.action
    return None
