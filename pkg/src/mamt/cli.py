"""Command line interface.

Subcommands: generate (maze files), run (single trial), batch (sweeps to CSV
and optional SVG plots), replay (trace rendering), validate (maze file lint).
Exit codes follow the engine: 0 success, 2 rule fault, 3 timeout; usage and
file errors also exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import engine, harness, maze, metrics, render

SOLVER_CHOICES = ("dfs", "bfs", "random")
STRATEGY_CHOICES = tuple(harness.STRATEGY_NAMES)  # mamt naive global fullknowledge


def _parse_wh(text: str):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None


def _maze_from_args(parser, args):
    given = [x for x in (args.maze, args.grid, args.geometric) if x is not None]
    if len(given) != 1:
        parser.error("exactly one of --maze, --grid, --geometric is required")
    try:
        if args.maze is not None:
            with open(args.maze) as fh:
                return maze.parse_maze(fh.read())
        if args.grid is not None:
            return maze.generate_grid_maze(args.grid[0], args.grid[1], args.maze_seed)
        return maze.generate_geometric_maze(args.geometric, args.maze_seed)
    except (OSError, maze.MazeError) as exc:
        parser.error(str(exc))


def _add_maze_args(p):
    p.add_argument("--maze", help="maze file to load")
    p.add_argument("--grid", type=_parse_wh, metavar="WxH", help="generate a grid maze")
    p.add_argument("--geometric", type=int, metavar="N", help="generate a geometric maze")
    p.add_argument("--maze-seed", type=int, default=0, help="seed for --grid/--geometric")


def cmd_generate(parser, args):
    if args.grid is None and args.geometric is None:
        parser.error("one of --grid or --geometric is required")
    args.maze = None
    args.maze_seed = args.seed
    mz = _maze_from_args(parser, args)
    text = maze.serialize_maze(mz)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{mz.node_count} nodes, {mz.edge_count} edges", file=sys.stderr)
    return 0


def cmd_run(parser, args):
    mz = _maze_from_args(parser, args)
    config = engine.TrialConfig(
        maze=mz,
        n=args.n,
        strategy=harness.STRATEGY_NAMES[args.strategy],
        solver=args.solver,
        seed=args.seed,
        step_cap=args.step_cap,
        record_trace=bool(args.trace),
    )
    try:
        config.validate()
    except ValueError as exc:
        parser.error(str(exc))
    result = engine.run_trial(config)
    if args.trace:
        with open(args.trace, "w") as fh:
            for entry in result.trace:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
    m = metrics.compute_metrics(result)
    if m:
        print(f"{result.status} makespan={m[0]} avg_fuel={m[1]}")
    else:
        print(result.status)
    return result.exit_code


def _load_config_file(parser, path) -> dict:
    out = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    parser.error(f"{path}:{lineno}: expected key = value")
                key, val = line.split("=", 1)
                out[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        parser.error(str(exc))
    return out


def cmd_batch(parser, args):
    # file values fill in whatever the command line left at its default
    if args.config:
        conf = _load_config_file(parser, args.config)
        argv = args._argv if args._argv is not None else sys.argv[1:]
        passed = {a.split("=")[0].lstrip("-").replace("-", "_")
                  for a in argv if a.startswith("--")}
        for key, val in conf.items():
            if key in passed:
                continue
            if key in ("sizes", "strategies", "solvers", "n"):
                setattr(args, key if key != "n" else "ns", val.split(","))
            elif key in ("trials", "seed", "step_cap"):
                setattr(args, key, int(val))
            elif key in ("out", "plot"):
                setattr(args, key, val)
            else:
                parser.error(f"unknown config key {key!r}")
    try:
        spec = harness.SweepSpec(
            sizes=[_parse_wh(s) if isinstance(s, str) else s for s in args.sizes],
            ns=[int(n) for n in args.ns],
            strategies=[harness.STRATEGY_NAMES.get(s, s) for s in args.strategies],
            solvers=list(args.solvers),
            trials=args.trials,
            base_seed=args.seed,
            step_cap=args.step_cap,
        )
        spec.validate()
    except (ValueError, argparse.ArgumentTypeError) as exc:
        parser.error(str(exc))
    records = harness.run_sweep(spec)
    metrics.write_csv(records, args.out)
    print(f"wrote {len(records)} rows to {args.out}")
    if args.plot:
        for path in harness.plot_summaries(records, args.plot):
            print(f"wrote {path}")
    return 0


def cmd_replay(parser, args):
    args.geometric = None
    args.grid = None
    args.maze_seed = 0
    mz = _maze_from_args(parser, args)
    try:
        trace = render.load_trace(args.trace)
    except OSError as exc:
        parser.error(str(exc))
    if args.format == "ascii":
        for frame in render.ascii_frames(mz, trace):
            print(frame)
            print()
        return 0
    try:
        frames = render.svg_frames(mz, trace)
    except ValueError as exc:
        parser.error(str(exc))
    os.makedirs(args.out, exist_ok=True)
    for k, doc in enumerate(frames):
        path = os.path.join(args.out, f"frame_{k:04d}.svg")
        with open(path, "w") as fh:
            fh.write(doc)
    print(f"wrote {len(frames)} frames to {args.out}")
    return 0


def cmd_validate(parser, args):
    try:
        with open(args.file) as fh:
            mz = maze.parse_maze(fh.read())
        maze.validate_maze(mz)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except maze.MazeError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(f"ok: {mz.node_count} nodes, {mz.edge_count} edges, "
          f"d(start, goal) = {mz.distance(mz.start, mz.goal)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mamt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a maze file")
    p.add_argument("--grid", type=_parse_wh, metavar="WxH")
    p.add_argument("--geometric", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run a single trial")
    _add_maze_args(p)
    p.add_argument("--n", type=int, default=1, help="number of agents")
    p.add_argument("--strategy", choices=STRATEGY_CHOICES, default="mamt")
    p.add_argument("--solver", choices=SOLVER_CHOICES, default="dfs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int, default=engine.DEFAULT_STEP_CAP)
    p.add_argument("--trace", help="write a JSONL trace here")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("batch", help="run a sweep, write CSV and optional plots")
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--sizes", nargs="+", default=["10x10"], metavar="WxH")
    p.add_argument("--n", dest="ns", nargs="+", default=["1", "5", "25", "50"], metavar="N")
    p.add_argument("--strategies", nargs="+", default=["mamt"], metavar="S")
    p.add_argument("--solvers", nargs="+", default=["dfs"], choices=SOLVER_CHOICES)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int, default=engine.DEFAULT_STEP_CAP)
    p.add_argument("--out", default="results.csv")
    p.add_argument("--plot", metavar="DIR", help="also write SVG plots here")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("replay", help="render a trace as ASCII or SVG frames")
    p.add_argument("trace", help="JSONL trace file")
    p.add_argument("--maze", required=True, help="maze file the trace was recorded on")
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p.add_argument("--out", default="frames", help="output directory for SVG frames")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("validate", help="lint a maze file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    return args.func(parser, args)


if __name__ == "__main__":
    sys.exit(main())
