"""Trial metrics and cross-trial aggregation.

Per trial: makespan (steps until every agent stands on the goal) and average
sum-of-fuel (mean edges traversed per agent).  Across trials: quartiles per
(maze size, n, strategy, solver) group, computed over successful trials only;
failed trials are counted, never dropped.
"""

from __future__ import annotations

import csv
import statistics
import warnings
from dataclasses import dataclass

from .engine import SUCCESS, TIMEOUT, TrialResult

CSV_COLUMNS = (
    "maze_w", "maze_h", "maze_seed", "n", "strategy", "solver",
    "trial_seed", "status", "makespan", "avg_fuel", "head_arrival", "optimal_d",
)


def compute_metrics(result: TrialResult):
    """(makespan, avg_fuel) of a successful trial; None otherwise, never zeros."""
    if result.status != SUCCESS:
        return None
    avg = sum(result.per_agent_fuel) / len(result.per_agent_fuel)
    return result.makespan, avg


@dataclass(frozen=True)
class TrialRecord:
    """One CSV row: trial identity, outcome, and metrics (None when absent)."""

    maze_w: int
    maze_h: int
    maze_seed: int
    n: int
    strategy: str
    solver: str
    trial_seed: int
    status: str
    makespan: int | None
    avg_fuel: float | None
    head_arrival: int | None
    optimal_d: int

    def row(self) -> list:
        return ["" if getattr(self, c) is None else getattr(self, c) for c in CSV_COLUMNS]


def record_from_result(result: TrialResult, *, maze, maze_seed, n, strategy, solver,
                       trial_seed) -> TrialRecord:
    w, h = maze.grid_shape if maze.grid_shape else (maze.node_count, 1)
    m = compute_metrics(result)
    return TrialRecord(
        maze_w=w,
        maze_h=h,
        maze_seed=maze_seed,
        n=n,
        strategy=strategy,
        solver=solver,
        trial_seed=trial_seed,
        status=result.status,
        makespan=m[0] if m else None,
        avg_fuel=m[1] if m else None,
        head_arrival=result.head_arrival_step,
        optimal_d=maze.distance(maze.start, maze.goal),
    )


def write_csv(records, path):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(CSV_COLUMNS)
        for r in records:
            out.writerow(r.row())


def read_csv(path) -> list:
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(
                TrialRecord(
                    maze_w=int(row["maze_w"]),
                    maze_h=int(row["maze_h"]),
                    maze_seed=int(row["maze_seed"]),
                    n=int(row["n"]),
                    strategy=row["strategy"],
                    solver=row["solver"],
                    trial_seed=int(row["trial_seed"]),
                    status=row["status"],
                    makespan=int(row["makespan"]) if row["makespan"] else None,
                    avg_fuel=float(row["avg_fuel"]) if row["avg_fuel"] else None,
                    head_arrival=int(row["head_arrival"]) if row["head_arrival"] else None,
                    optimal_d=int(row["optimal_d"]),
                )
            )
    return records


def quartiles(values):
    """(q1, median, q3) with the inclusive method; None for empty input."""
    vals = sorted(values)
    if not vals:
        return None
    if len(vals) == 1:
        v = vals[0]
        return (v, v, v)
    q1, q2, q3 = statistics.quantiles(vals, n=4, method="inclusive")
    return (q1, q2, q3)


@dataclass(frozen=True)
class BatchSummary:
    maze_w: int
    maze_h: int
    n: int
    strategy: str
    solver: str
    trials: int
    successes: int
    timeouts: int
    faults: int
    makespan_q: tuple | None  # (q1, median, q3) over successes
    avg_fuel_q: tuple | None
    optimal_d_q: tuple  # shortest-path reference across the group's mazes


GROUP_KEY = ("maze_w", "maze_h", "n", "strategy", "solver")


def aggregate(records) -> list:
    """One BatchSummary per (maze size, n, strategy, solver) group.

    Quartiles cover successful trials only; status counts always add up to the
    group's trial count.  A group without a single success gets None quartiles
    and a warning rather than a silent omission.
    """
    groups = {}
    for r in records:
        groups.setdefault(tuple(getattr(r, k) for k in GROUP_KEY), []).append(r)
    out = []
    for key in sorted(groups):
        rs = groups[key]
        ok = [r for r in rs if r.status == SUCCESS]
        timeouts = sum(1 for r in rs if r.status == TIMEOUT)
        faults = len(rs) - len(ok) - timeouts
        if not ok:
            warnings.warn(f"group {key}: no successful trials, quartiles omitted")
        out.append(
            BatchSummary(
                *key,
                trials=len(rs),
                successes=len(ok),
                timeouts=timeouts,
                faults=faults,
                makespan_q=quartiles([r.makespan for r in ok]),
                avg_fuel_q=quartiles([r.avg_fuel for r in ok]),
                optimal_d_q=quartiles([r.optimal_d for r in rs]),
            )
        )
    return out
