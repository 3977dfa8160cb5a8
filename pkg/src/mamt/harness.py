"""Batch sweep runner: seed derivation, parallel trial execution, CSV, plots.

Every trial in a sweep is identified by (maze size, trial index, n, strategy,
solver).  Both seeds are derived from the base seed with the documented stream
key construction (see mamt.rng.stream_key):

* ``maze_seed  = stream_key(base, "maze", w, h, trial_index)`` -- shared by
  every strategy/solver/n cell so comparisons run on identical mazes;
* ``trial_seed = stream_key(base, "trial", w, h, strategy, solver, n,
  trial_index)`` -- independent randomness per cell.

Trials may run in parallel (``MAMT_THREADS`` caps the worker count); results
are always emitted in deterministic cell order, so the CSV is byte-identical
regardless of scheduling.
"""

from __future__ import annotations

import functools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import engine, maze, metrics, rng

# CLI spelling -> internal strategy name
STRATEGY_NAMES = {
    "mamt": "mamt",
    "naive": "naive",
    "global": "global_comm",
    "fullknowledge": "full_knowledge",
}


@dataclass
class SweepSpec:
    sizes: list = field(default_factory=lambda: [(10, 10)])  # (width, height)
    ns: list = field(default_factory=lambda: [1, 5, 25, 50, 100, 200, 300])
    strategies: list = field(default_factory=lambda: ["mamt"])
    solvers: list = field(default_factory=lambda: ["dfs"])
    trials: int = 20
    base_seed: int = 0
    step_cap: int = engine.DEFAULT_STEP_CAP

    def validate(self):
        for name, val in (("sizes", self.sizes), ("ns", self.ns),
                          ("strategies", self.strategies), ("solvers", self.solvers)):
            if not val:
                raise ValueError(f"{name} must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for s in self.strategies:
            if s not in engine.STRATEGIES:
                raise ValueError(f"unknown strategy {s!r}")

    def cells(self):
        """All trial descriptors in the deterministic output order."""
        for (w, h) in self.sizes:
            for n in self.ns:
                for strategy in self.strategies:
                    for solver in self.solvers:
                        for t in range(self.trials):
                            yield (w, h, n, strategy, solver, t)


def maze_seed(base_seed: int, w: int, h: int, trial_index: int) -> int:
    return rng.stream_key(base_seed, "maze", w, h, trial_index)


def trial_seed(base_seed: int, w: int, h: int, strategy: str, solver: str,
               n: int, trial_index: int) -> int:
    return rng.stream_key(base_seed, "trial", w, h, strategy, solver, n, trial_index)


@functools.lru_cache(maxsize=64)
def _grid_maze(w: int, h: int, seed: int):
    return maze.generate_grid_maze(w, h, seed)


def _run_one(args):
    w, h, n, strategy, solver, t, base_seed, step_cap = args
    mseed = maze_seed(base_seed, w, h, t)
    tseed = trial_seed(base_seed, w, h, strategy, solver, n, t)
    mz = _grid_maze(w, h, mseed)
    result = engine.run_trial(
        engine.TrialConfig(mz, n, strategy, solver, seed=tseed, step_cap=step_cap)
    )
    return metrics.record_from_result(
        result, maze=mz, maze_seed=mseed, n=n, strategy=strategy,
        solver=solver, trial_seed=tseed,
    )


def worker_count() -> int:
    env = os.environ.get("MAMT_THREADS", "")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list:
    """Run every cell of the sweep; returns TrialRecords in cell order."""
    spec.validate()
    jobs = [(w, h, n, st, so, t, spec.base_seed, spec.step_cap)
            for (w, h, n, st, so, t) in spec.cells()]
    if workers is None:
        workers = worker_count()
    if workers <= 1 or len(jobs) <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (workers * 4))))


def plot_summaries(records, out_dir) -> list:
    """Median makespan and avg-fuel versus n per maze size, one SVG each.

    Solid median lines with interquartile bands per (strategy, solver); the
    dashed line is the median shortest-path length d(s, g) of the group's
    mazes.  Returns the written file paths.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    summaries = metrics.aggregate(records)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    sizes = sorted({(s.maze_w, s.maze_h) for s in summaries})
    for (w, h) in sizes:
        rows = [s for s in summaries if (s.maze_w, s.maze_h) == (w, h)]
        series = sorted({(s.strategy, s.solver) for s in rows})
        for metric, attr in (("makespan", "makespan_q"), ("avg_fuel", "avg_fuel_q")):
            fig, ax = plt.subplots(figsize=(6, 4))
            for strategy, solver in series:
                pts = sorted(
                    (s.n, getattr(s, attr)) for s in rows
                    if (s.strategy, s.solver) == (strategy, solver) and getattr(s, attr)
                )
                if not pts:
                    continue
                ns = [p[0] for p in pts]
                q1 = [p[1][0] for p in pts]
                med = [p[1][1] for p in pts]
                q3 = [p[1][2] for p in pts]
                ax.plot(ns, med, marker="o", label=f"{strategy}/{solver}")
                ax.fill_between(ns, q1, q3, alpha=0.2)
            dref = metrics.quartiles([s.optimal_d_q[1] for s in rows])
            if dref:
                ax.axhline(dref[1], linestyle="--", color="gray", label="median d(s,g)")
            ax.set_xlabel("agents n")
            ax.set_ylabel(metric)
            ax.set_title(f"{w}x{h} mazes")
            ax.legend(fontsize=8)
            path = os.path.join(out_dir, f"{metric}_{w}x{h}.svg")
            fig.savefig(path)
            plt.close(fig)
            written.append(path)
    return written
