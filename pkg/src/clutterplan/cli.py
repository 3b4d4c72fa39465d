"""``clutterplan`` command line: plan, batch, graph, render, gen.

Exit codes: 0 success, 2 planner Fail, 3 timeout, 4 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from .corridor import DEFAULT_RESOLUTION
from .events import write_log, read_log
from .geometry import ConfigurationError
from .harness import (
    DEFAULT_BUDGET_S,
    METHODS,
    GenerationError,
    InstanceConfig,
    generate_instance,
    metrics_csv,
    run_batch,
    run_episode,
    summary_csv,
)
from .motion import AlwaysSucceed, Disc2D, MotionOracle, RandomFirstFault, ScriptedFault
from .planner import reloc_path
from .render import render_frames, render_world
from .scenario import ScenarioError, load_scenario, save_scenario
from .tgraph import gen_graph, node_label
from .world import CASES, WorldState

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_TIMEOUT = 3
EXIT_INPUT = 4


class InputError(Exception):
    pass


def make_oracle(spec: str, seed: int = 0, resolution: float = DEFAULT_RESOLUTION) -> MotionOracle:
    """``always`` | ``disc2d`` | ``fault:<file>`` | ``random:<p>[:always|disc2d]``."""
    if spec == "always":
        return AlwaysSucceed()
    if spec == "disc2d":
        return Disc2D(resolution)
    if spec.startswith("fault:"):
        path = spec[len("fault:"):]
        try:
            return ScriptedFault.from_file(path)
        except OSError as exc:
            raise InputError(f"cannot read fault table {path!r}: {exc.strerror}") from None
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if spec.startswith("random:"):
        parts = spec.split(":")
        try:
            p = float(parts[1])
        except (IndexError, ValueError):
            raise InputError(f"bad oracle {spec!r}: expected random:<p>[:base]") from None
        base = parts[2] if len(parts) > 2 else "always"
        if base not in ("always", "disc2d") or len(parts) > 3:
            raise InputError(f"bad oracle {spec!r}: base must be always or disc2d")
        try:
            return RandomFirstFault(p, seed, make_oracle(base, seed, resolution))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    raise InputError(f"unknown oracle {spec!r}")


def _instance_config(args, n: int | None = None, seed: int | None = None) -> InstanceConfig:
    try:
        return InstanceConfig(
            n_objects=args.n if n is None else n,
            case=args.case,
            seed=args.seed if seed is None else seed,
            resolution=args.grid_res,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _world(args) -> tuple[WorldState, dict]:
    """Scenario from ``--scenario`` or a generated instance, plus its description."""
    if getattr(args, "scenario", None):
        try:
            world = load_scenario(args.scenario)
        except OSError as exc:
            raise InputError(f"cannot read scenario {args.scenario!r}: {exc.strerror}") from None
        except ScenarioError as exc:
            raise InputError(f"{args.scenario}: {exc}") from None
        return world, {"scenario": str(args.scenario)}
    cfg = _instance_config(args)
    try:
        world = generate_instance(cfg)
    except GenerationError as exc:
        raise InputError(str(exc)) from None
    desc = asdict(cfg)
    desc["camera"] = asdict(cfg.camera)
    return world, {"instance": desc}


def _emit_config(args, extra: dict) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg.update(extra)
    print(json.dumps({"config": cfg}, sort_keys=True, default=list))
    return cfg


def _outdir(args) -> Path | None:
    if not args.out:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_plan(args) -> int:
    world, desc = _world(args)
    oracle = make_oracle(args.oracle, args.seed, args.grid_res)
    cfg = _emit_config(args, desc)
    m = run_episode(world, args.method, oracle, args.timeout_s, args.grid_res, args.seed)
    out = _outdir(args)
    if out is not None:
        write_log(m.events, out / "events.jsonl")
        (out / "metrics.csv").write_text(metrics_csv([m]))
        (out / "config.json").write_text(json.dumps(cfg, indent=2, sort_keys=True, default=list) + "\n")
    print(json.dumps({
        "success": m.success,
        "relocated": m.relocated,
        "order": m.relocated_ids,
        "replans": m.replans,
        "reason": m.reason,
    }))
    if m.success:
        return EXIT_OK
    return EXIT_TIMEOUT if m.timed_out else EXIT_FAIL


def cmd_batch(args) -> int:
    try:
        ns = [int(x) for x in str(args.n).split(",")]
    except ValueError:
        raise InputError(f"bad --n {args.n!r}: expected comma-separated integers") from None
    methods = args.methods.split(",")
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise InputError(f"unknown methods: {bad}")
    if args.reps < 0:
        raise InputError("--reps must be non-negative")
    make_oracle(args.oracle, 0, args.grid_res)  # validate before the long run
    configs = [_instance_config(args, n=n, seed=args.seed + 1000 * n) for n in ns]
    cfg = _emit_config(args, {"instance_seeds": {n: [c.seed, c.seed + args.reps - 1] for n, c in zip(ns, configs)}})
    try:
        rows, table = run_batch(
            configs, args.reps, methods,
            oracle_factory=lambda seed: make_oracle(args.oracle, seed, args.grid_res),
            budget=args.timeout_s,
        )
    except GenerationError as exc:
        raise InputError(str(exc)) from None
    out = _outdir(args)
    summary = summary_csv(table)
    if out is not None:
        (out / "metrics.csv").write_text(metrics_csv(rows))
        (out / "summary.csv").write_text(summary)
        (out / "config.json").write_text(json.dumps(cfg, indent=2, sort_keys=True, default=list) + "\n")
    sys.stdout.write(summary)
    return EXIT_OK


def cmd_graph(args) -> int:
    world, desc = _world(args)
    _emit_config(args, desc)
    g = gen_graph(world.known_objects(), world.workspace, args.grid_res)
    text = g.dump()
    plan = reloc_path(g, world.target_id) if world.target_detected else None
    if plan is not None:
        text += "path " + " ".join(node_label(v) for v in plan.source_path) + "\n"
    else:
        text += "path none\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_render(args) -> int:
    world, desc = _world(args)
    _emit_config(args, desc)
    if args.log:
        try:
            events = read_log(args.log)
        except OSError as exc:
            raise InputError(f"cannot read log {args.log!r}: {exc.strerror}") from None
        frames = render_frames(world, events, resolution=args.grid_res)
        out = Path(args.out or "frames")
        out.mkdir(parents=True, exist_ok=True)
        for i, svg in enumerate(frames):
            (out / f"frame_{i:03d}.svg").write_text(svg)
        print(f"wrote {len(frames)} frames to {out}")
    else:
        svg = render_world(world, resolution=args.grid_res)
        out = Path(args.out or "scene.svg")
        out.write_text(svg)
        print(f"wrote {out}")
    return EXIT_OK


def cmd_gen(args) -> int:
    world, desc = _world(args)
    _emit_config(args, desc)
    out = Path(args.out or f"scene_{args.case}_{args.n}_{args.seed}.json")
    save_scenario(world, out)
    print(f"wrote {out}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; argparse's own status 2 means Fail here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clutterplan", description="Target retrieval among movable obstacles on a shelf.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scenario=True, n_list=False):
        if scenario:
            sp.add_argument("--scenario", help="scenario JSON (lengths in cm); otherwise an instance is generated")
        sp.add_argument("--case", choices=CASES, default="I")
        if n_list:
            sp.add_argument("--n", default="12,16,20", help="comma-separated object counts")
        else:
            sp.add_argument("--n", default=12, type=int, help="number of objects")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--grid-res", type=float, default=DEFAULT_RESOLUTION, help="corridor grid cell size (m)")
        sp.add_argument("--out")

    sp = sub.add_parser("plan", help="run one episode")
    common(sp)
    sp.add_argument("--method", choices=METHODS, default="proposed")
    sp.add_argument("--oracle", default="always", help="always | disc2d | fault:<file> | random:<p>[:base]")
    sp.add_argument("--timeout-s", type=float, default=DEFAULT_BUDGET_S)
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("batch", help="run seeded instances for every method")
    common(sp, scenario=False, n_list=True)
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--methods", default=",".join(METHODS))
    sp.add_argument("--oracle", default="disc2d")
    sp.add_argument("--timeout-s", type=float, default=DEFAULT_BUDGET_S)
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("graph", help="print the T-graph adjacency and min-hop path")
    common(sp)
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("render", help="draw the scene (or one frame per step of a log) as SVG")
    common(sp)
    sp.add_argument("--log", help="event log from 'plan --out'")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("gen", help="write a generated instance as a scenario file")
    common(sp, scenario=False)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
