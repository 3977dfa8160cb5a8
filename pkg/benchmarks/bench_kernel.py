"""Benchmark the compiled kernel against the pure-Python reference loop.

Runs the same batch of trials through both execution paths and prints per-path
wall time plus the speedup.  Usage:

    python benchmarks/bench_kernel.py --size 20x20 --n 50 --trials 10
"""

import argparse
import time

from mamt import engine, maze
from mamt._kernel import kernel


def run_batch(args, use_kernel):
    t0 = time.perf_counter()
    for seed in range(args.trials):
        mz = maze.generate_grid_maze(args.w, args.h, seed)
        r = engine.run_trial(engine.TrialConfig(
            mz, args.n, "mamt", args.solver, seed=seed, use_kernel=use_kernel))
        assert r.status == "success", r.status
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", default="20x20")
    parser.add_argument("--n", type=int, default=50)
    parser.add_argument("--solver", default="dfs", choices=("dfs", "bfs", "random"))
    parser.add_argument("--trials", type=int, default=10)
    args = parser.parse_args()
    args.w, args.h = (int(x) for x in args.size.split("x"))

    if kernel is None:
        parser.error("compiled kernel unavailable (built without Cython, or MAMT_PURE=1)")
    compiled = run_batch(args, use_kernel=True)
    pure = run_batch(args, use_kernel=False)
    per = args.trials
    print(f"{args.size} n={args.n} solver={args.solver} trials={per}")
    print(f"  compiled: {compiled:8.3f}s  ({1000 * compiled / per:8.2f} ms/trial)")
    print(f"  pure:     {pure:8.3f}s  ({1000 * pure / per:8.2f} ms/trial)")
    print(f"  speedup:  {pure / compiled:8.1f}x")


if __name__ == "__main__":
    main()
