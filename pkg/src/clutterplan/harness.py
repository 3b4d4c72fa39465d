"""Random instances, single episodes and batch experiments."""

from __future__ import annotations

import csv
import io
import math
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .baselines import DistanceConfig, VfhConfig, distance_planner, vfh_local_planner
from .corridor import DEFAULT_RESOLUTION
from .events import Event, outcome_from_log, relocated_from_log
from .geometry import ObjectSpec, Workspace, disc_overlaps
from .motion import AlwaysSucceed, Disc2D, MotionOracle
from .occlusion import CameraModel, detected_objects
from .planner import TIMEOUT, PlanOutcome, reloc_path, reloc_planner
from .tgraph import gen_graph
from .world import CASES, WorldState

METHODS = ("proposed", "distance", "vfh")
DEFAULT_BUDGET_S = 60.0

METRICS_COLUMNS = (
    "method", "case", "N", "seed", "success", "relocated", "replans", "time_total_s", "time_per_action_s",
)
SUMMARY_COLUMNS = (
    "method", "case", "N", "episodes", "success_rate", "relocated_mean", "relocated_std",
    "relocated_failed_mean", "replans_mean", "time_per_action_mean", "time_per_action_std",
)


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceConfig:
    n_objects: int = 12
    length: float = 0.9
    width: float = 0.45
    diameter_range: tuple[float, float] = (0.05, 0.06)
    height_range: tuple[float, float] = (0.06, 0.07)
    robot_radius: float = 0.05
    safety_margin: float = 0.005
    case: str = "I"
    hidden_fraction: float = 0.2
    seed: int = 0
    camera: CameraModel = field(default_factory=CameraModel)
    resolution: float = DEFAULT_RESOLUTION
    require_path: bool = True
    require_blocked: bool = True
    max_attempts: int = 500
    placement_tries: int = 2000

    def __post_init__(self):
        if self.n_objects < 1:
            raise ValueError("n_objects must be at least 1")
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case!r}")
        lo, hi = self.diameter_range
        if not 0 < lo <= hi:
            raise ValueError("bad diameter range")
        lo, hi = self.height_range
        if not 0 < lo <= hi:
            raise ValueError("bad height range")
        if not 0.0 <= self.hidden_fraction < 1.0:
            raise ValueError("hidden_fraction must be in [0, 1)")

    def workspace(self) -> Workspace:
        return Workspace(self.length, self.width, self.robot_radius, self.safety_margin)

    @property
    def n_hidden(self) -> int:
        if self.case != "II" or self.n_objects < 2:
            return 0
        # the target is never hidden in Case II
        return min(math.ceil(self.hidden_fraction * self.n_objects - 1e-9), self.n_objects - 1)


class _Sampler:
    def __init__(self, cfg: InstanceConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.rng = rng
        self.w = cfg.workspace()

    def shape(self) -> tuple[float, float]:
        d = self.rng.uniform(*self.cfg.diameter_range)
        h = self.rng.uniform(*self.cfg.height_range)
        return d / 2, h

    def place(self, placed: list[ObjectSpec], oid: int, accept=None, target=False) -> ObjectSpec | None:
        """Uniform rejection sampling of one non-overlapping object; ``accept`` adds a condition."""
        r, h = self.shape()
        w = self.w
        for _ in range(self.cfg.placement_tries):
            x = self.rng.uniform(r, w.length - r)
            y = self.rng.uniform(r, w.width - r)
            o = ObjectSpec(oid, float(x), float(y), float(r), float(h), is_target=target)
            if any(disc_overlaps(o.disc, p.disc) for p in placed):
                continue
            if accept is not None and not accept(o, placed):
                continue
            return o
        return None


def _detected(objs: list[ObjectSpec], cfg: InstanceConfig) -> set[int]:
    return detected_objects(objs, cfg.camera, cfg.workspace())


def _attempt(cfg: InstanceConfig, rng: np.random.Generator) -> list[ObjectSpec] | None:
    s = _Sampler(cfg, rng)
    n = cfg.n_objects
    if cfg.case == "I":
        target = int(rng.integers(n))
        objs: list[ObjectSpec] = []
        for i in range(n):
            o = s.place(objs, i, target=(i == target))
            if o is None:
                return None
            objs.append(o)
        return objs

    if cfg.case == "II":
        ids = [int(i) for i in rng.permutation(n)]
        n_hidden = cfg.n_hidden
        visible_ids, hidden_ids = ids[: n - n_hidden], ids[n - n_hidden:]
        target = visible_ids[int(rng.integers(len(visible_ids)))]

        def stays_all_visible(o, placed):
            cand = placed + [o]
            return len(_detected(cand, cfg)) == len(cand)

        def fully_hidden(o, placed):
            return o.id not in _detected(placed + [o], cfg)

        objs = []
        for i in visible_ids:
            o = s.place(objs, i, stays_all_visible, target=(i == target))
            if o is None:
                return None
            objs.append(o)
        for i in hidden_ids:
            o = s.place(objs, i, fully_hidden)
            if o is None:
                return None
            objs.append(replace(o, hidden=True))
        if _detected(objs, cfg) != set(visible_ids):
            return None
        return sorted(objs, key=lambda o: o.id)

    # Case III: obstacles anywhere, the target somewhere the camera cannot see
    target = int(rng.integers(n))
    objs = []
    for i in range(n):
        if i == target:
            continue
        o = s.place(objs, i)
        if o is None:
            return None
        objs.append(o)
    t = s.place(objs, target, lambda o, placed: o.id not in _detected(placed + [o], cfg), target=True)
    if t is None:
        return None
    objs.append(t)
    seen = _detected(objs, cfg)
    return sorted((replace(o, hidden=o.id not in seen) for o in objs), key=lambda o: o.id)


def initial_hops(objects: Sequence[ObjectSpec], w: Workspace, resolution: float = DEFAULT_RESOLUTION) -> int | None:
    """Relocations needed with full knowledge and no motion failures (None if impossible)."""
    target = next(o.id for o in objects if o.is_target)
    plan = reloc_path(gen_graph(objects, w, resolution), target)
    return None if plan is None else plan.k


def target_free(objects: Sequence[ObjectSpec], w: Workspace, resolution: float = DEFAULT_RESOLUTION) -> bool:
    """Could the target be picked and carried out with every other object in place?"""
    world = WorldState.from_objects(objects, w)
    return Disc2D(resolution).query(world.target_id, world, w)


def generate_instance(cfg: InstanceConfig) -> WorldState:
    """Seeded random shelf scene for the configured case.

    Objects are placed uniformly at random without overlap. Case II hides
    exactly ``n_hidden`` non-target objects fully behind others; Case III hides
    the target. With ``require_path`` the instance is resampled until the
    target is retrievable when everything is known, and with
    ``require_blocked`` (ignored for a single object) until the target cannot
    be carried out without first relocating something.
    """
    rng = np.random.default_rng(cfg.seed)
    w = cfg.workspace()
    for _ in range(cfg.max_attempts):
        objs = _attempt(cfg, rng)
        if objs is None:
            continue
        if cfg.require_path or cfg.require_blocked:
            k = initial_hops(objs, w, cfg.resolution)
            if cfg.require_path and k is None:
                continue
            if cfg.require_blocked and len(objs) > 1 and k is not None and target_free(objs, w, cfg.resolution):
                continue
        return WorldState.from_objects(objs, w, cfg.camera, cfg.case)
    raise GenerationError(
        f"could not place {cfg.n_objects} objects for case {cfg.case} in {cfg.max_attempts} attempts"
    )


@dataclass
class RunMetrics:
    method: str
    case: str
    n: int
    seed: int | None
    success: bool
    relocated: int
    replans: int
    time_total_s: float
    time_per_action_s: float
    reason: str | None = None
    relocated_ids: list[int] = field(default_factory=list)
    events: list[Event] = field(default_factory=list, repr=False)

    @property
    def timed_out(self) -> bool:
        return self.reason == TIMEOUT

    def csv_row(self) -> dict:
        return {
            "method": self.method,
            "case": self.case,
            "N": self.n,
            "seed": "" if self.seed is None else self.seed,
            "success": int(self.success),
            "relocated": self.relocated,
            "replans": self.replans,
            "time_total_s": f"{self.time_total_s:.6f}",
            "time_per_action_s": f"{self.time_per_action_s:.6f}",
        }


def run_planner(
    method: str,
    world: WorldState,
    oracle: MotionOracle,
    resolution: float = DEFAULT_RESOLUTION,
    deadline: float | None = None,
    distance_cfg: DistanceConfig = DistanceConfig(),
    vfh_cfg: VfhConfig = VfhConfig(),
) -> PlanOutcome:
    w = world.workspace
    if method == "proposed":
        return reloc_planner(world, oracle, w, resolution, deadline)
    if not world.target_detected:
        return PlanOutcome("Fail", reason="target not detected")
    if method == "distance":
        return distance_planner(world, oracle, w, distance_cfg, resolution, deadline)
    if method == "vfh":
        return vfh_local_planner(world, oracle, w, vfh_cfg, resolution, deadline)
    raise ValueError(f"unknown method {method!r}")


def run_episode(
    world: WorldState,
    method: str = "proposed",
    oracle: MotionOracle | None = None,
    budget: float = DEFAULT_BUDGET_S,
    resolution: float = DEFAULT_RESOLUTION,
    seed: int | None = None,
    distance_cfg: DistanceConfig = DistanceConfig(),
    vfh_cfg: VfhConfig = VfhConfig(),
) -> RunMetrics:
    """Run one planner on ``world`` (mutated) under a wall-clock budget."""
    oracle = oracle if oracle is not None else AlwaysSucceed()
    n = len(world.objects)
    t0 = time.monotonic()
    out = run_planner(method, world, oracle, resolution, t0 + budget, distance_cfg, vfh_cfg)
    elapsed = time.monotonic() - t0
    success = out.success
    reason = out.reason
    if success and elapsed > budget:
        success, reason = False, TIMEOUT
    k = len(out.relocated)
    return RunMetrics(
        method=method,
        case=world.case,
        n=n,
        seed=seed,
        success=success,
        relocated=k,
        replans=out.replans,
        time_total_s=elapsed,
        time_per_action_s=elapsed / k if k else elapsed,
        reason=reason,
        relocated_ids=list(out.relocated),
        events=out.events,
    )


OracleFactory = Callable[[int], MotionOracle]


def run_batch(
    configs: Iterable[InstanceConfig],
    repetitions: int,
    methods: Sequence[str] = METHODS,
    oracle_factory: OracleFactory | None = None,
    budget: float = DEFAULT_BUDGET_S,
) -> tuple[list[RunMetrics], list[dict]]:
    """Run every method on ``repetitions`` seeded instances per config.

    Instance ``r`` of a config uses seed ``cfg.seed + r``; every method gets
    its own copy of the instance and a fresh oracle from ``oracle_factory(seed)``.
    Returns the per-episode metrics and the aggregate table.
    """
    oracle_factory = oracle_factory or (lambda seed: AlwaysSucceed())
    rows: list[RunMetrics] = []
    for cfg in configs:
        for rep in range(repetitions):
            seed = cfg.seed + rep
            world = generate_instance(replace(cfg, seed=seed))
            for method in methods:
                rows.append(
                    run_episode(world.copy(), method, oracle_factory(seed), budget, cfg.resolution, seed)
                )
    return rows, aggregate(rows)


def _mean(xs: list[float]) -> float:
    return statistics.fmean(xs) if xs else float("nan")


def _std(xs: list[float]) -> float:
    return statistics.stdev(xs) if len(xs) > 1 else 0.0 if xs else float("nan")


def aggregate(rows: Sequence[RunMetrics]) -> list[dict]:
    """Per (method, case, N): success rate and statistics over successful episodes.

    Failed episodes' relocation counts are reported separately in
    ``relocated_failed_mean``.
    """
    groups: dict[tuple, list[RunMetrics]] = {}
    for r in sorted(rows, key=lambda r: (r.method, r.case, r.n, -1 if r.seed is None else r.seed)):
        groups.setdefault((r.method, r.case, r.n), []).append(r)
    table = []
    for (method, case, n), rs in groups.items():
        ok = [r for r in rs if r.success]
        bad = [r for r in rs if not r.success]
        table.append({
            "method": method,
            "case": case,
            "N": n,
            "episodes": len(rs),
            "success_rate": len(ok) / len(rs),
            "relocated_mean": _mean([r.relocated for r in ok]),
            "relocated_std": _std([r.relocated for r in ok]),
            "relocated_failed_mean": _mean([r.relocated for r in bad]),
            "replans_mean": _mean([r.replans for r in rs]),
            "time_per_action_mean": _mean([r.time_per_action_s for r in ok]),
            "time_per_action_std": _std([r.time_per_action_s for r in ok]),
        })
    return table


def metrics_from_events(row: RunMetrics) -> RunMetrics:
    """Rebuild the count fields of ``row`` from its event log alone."""
    relocated = relocated_from_log(row.events)
    outcome = outcome_from_log(row.events)
    return replace(row, relocated=len(relocated), success=(outcome == "done") and not row.timed_out)


def metrics_csv(rows: Sequence[RunMetrics]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=METRICS_COLUMNS, lineterminator="\n")
    wr.writeheader()
    for r in rows:
        wr.writerow(r.csv_row())
    return buf.getvalue()


def summary_csv(table: Sequence[dict]) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    wr.writeheader()
    for row in table:
        wr.writerow({k: (f"{v:.6g}" if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
