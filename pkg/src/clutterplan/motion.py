"""Pluggable pick-and-place feasibility oracles.

They stand in for arm motion planning. An oracle answers one question: can
the robot pick object ``obj_id`` where it stands now and carry it to the
disposal zone? Planners only ever talk to this interface.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Mapping, Protocol, Union

import numpy as np

from .corridor import DEFAULT_RESOLUTION, CorridorQuery, corridor_exists
from .geometry import Workspace
from .world import WorldState

ALWAYS = "always"
FaultSpec = Union[int, str]


class MotionOracle(Protocol):
    def query(self, obj_id: int, world: WorldState, w: Workspace) -> bool: ...


class AlwaysSucceed:
    def query(self, obj_id, world, w):
        return True

    def __repr__(self):
        return "AlwaysSucceed()"


class ScriptedFault:
    """Replays a fault table: ``{object id: failures before success, or "always"}``.

    Verdicts depend only on how many times each object has been queried, so a
    replayed scenario gives the same answers in the same order.
    """

    def __init__(self, table: Mapping[int, FaultSpec] | None = None):
        self.table = dict(table or {})
        for k, v in self.table.items():
            if v != ALWAYS and not (isinstance(v, int) and v >= 0):
                raise ValueError(f"bad fault spec for object {k}: {v!r}")
        self.queries: Counter[int] = Counter()

    def query(self, obj_id, world, w):
        seen = self.queries[obj_id]
        self.queries[obj_id] += 1
        spec = self.table.get(obj_id, 0)
        if spec == ALWAYS:
            return False
        return seen >= spec

    def reset(self) -> None:
        self.queries.clear()

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedFault":
        return cls(parse_fault_table(Path(path).read_text()))

    def __repr__(self):
        return f"ScriptedFault({self.table!r})"


def parse_fault_table(text: str) -> dict[int, FaultSpec]:
    """Parse ``object_id fail_count|always`` lines; ``#`` starts a comment."""
    table: dict[int, FaultSpec] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"fault table line {lineno}: expected 'object_id fail_count|always'")
        oid = int(parts[0])
        if parts[1] == ALWAYS:
            table[oid] = ALWAYS
        else:
            count = int(parts[1])
            if count < 0:
                raise ValueError(f"fault table line {lineno}: negative fail count")
            table[oid] = count
    return table


def format_fault_table(table: Mapping[int, FaultSpec]) -> str:
    return "".join(f"{k} {table[k]}\n" for k in sorted(table))


class Disc2D:
    """Geometric feasibility in the plane.

    Succeeds when the bare end-effector (radius ``r_r``) can reach the object
    from home, and the end-effector holding it (radius ``r_o + r_r + r_s``) can
    carry it out to the disposal zone. Both legs see every object physically on
    the shelf, hidden ones included.
    """

    def __init__(self, resolution: float = DEFAULT_RESOLUTION):
        self.resolution = resolution

    def query(self, obj_id, world, w):
        o = world.objects[obj_id]
        obstacles = tuple(b.disc for b in world.objects.values() if b.id != obj_id)
        reach = CorridorQuery(w.robot_radius, w.robot_home, o.center, obstacles, w)
        if not corridor_exists(reach, self.resolution):
            return False
        carry = CorridorQuery(o.radius + w.robot_radius + w.safety_margin, o.center, w.disposal_zone, obstacles, w)
        return corridor_exists(carry, self.resolution)

    def __repr__(self):
        return f"Disc2D(resolution={self.resolution})"


class RandomFirstFault:
    """Each object's first query fails with probability ``p``; later queries defer to ``base``.

    Whether an object is faulty is drawn from a generator seeded by
    ``(seed, object id)``, so the verdicts do not depend on query order and
    every planner run on the same instance faces the same faults.
    """

    def __init__(self, p: float = 0.2, seed: int = 0, base: MotionOracle | None = None):
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        self.p = p
        self.seed = seed
        self.base = base if base is not None else AlwaysSucceed()
        self.queries: Counter[int] = Counter()

    def faulty(self, obj_id: int) -> bool:
        return bool(np.random.default_rng([self.seed, obj_id]).random() < self.p)

    def query(self, obj_id, world, w):
        first = self.queries[obj_id] == 0
        self.queries[obj_id] += 1
        if first and self.faulty(obj_id):
            return False
        return self.base.query(obj_id, world, w)

    def __repr__(self):
        return f"RandomFirstFault(p={self.p}, seed={self.seed}, base={self.base!r})"
