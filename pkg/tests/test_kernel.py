"""Compiled kernel vs reference loop: full result equality on shared inputs."""

import subprocess
import sys

import pytest

from mamt import engine, maze
from mamt._kernel import kernel
from conftest import make_star4

pytestmark = pytest.mark.skipif(kernel is None, reason="compiled kernel not built")


def both(config_kw):
    a = engine.run_trial(engine.TrialConfig(use_kernel=True, **config_kw))
    b = engine.run_trial(engine.TrialConfig(use_kernel=False, **config_kw))
    return a, b


def test_star4_exact_equality():
    kw = dict(maze=make_star4(), n=2, strategy="mamt", solver="dfs", seed=0,
              record_heads=True, check_invariants=True)
    a, b = both(kw)
    assert a == b
    assert a.head_positions == [1, 0, 2, 3, 3, 3]


@pytest.mark.parametrize("solver", ["dfs", "bfs", "random"])
@pytest.mark.parametrize("n", [1, 4, 9])
def test_grid_sweep_equality(solver, n):
    for seed in range(6):
        mz = maze.generate_grid_maze(6, 6, seed)
        kw = dict(maze=mz, n=n, strategy="mamt", solver=solver, seed=seed,
                  record_heads=True, check_invariants=True)
        a, b = both(kw)
        assert a == b, f"divergence at seed={seed}"
        assert a.status == "success"
        assert a.invariant_violations == []


def test_geometric_maze_equality():
    mz = maze.generate_geometric_maze(20, 4)
    kw = dict(maze=mz, n=5, strategy="mamt", solver="bfs", seed=7,
              record_heads=True)
    a, b = both(kw)
    assert a == b


def test_timeout_agrees():
    kw = dict(maze=make_star4(), n=2, strategy="mamt", solver="dfs", seed=0,
              step_cap=3)
    a, b = both(kw)
    assert a.status == b.status == "timeout"
    assert a.per_agent_fuel == b.per_agent_fuel


def test_kernel_refuses_tracing():
    cfg = engine.TrialConfig(maze=make_star4(), n=2, strategy="mamt",
                             solver="dfs", seed=0, record_trace=True,
                             use_kernel=True)
    with pytest.raises(RuntimeError):
        engine.run_trial(cfg)


def test_pure_env_disables_kernel():
    code = (
        "from mamt._kernel import kernel\n"
        "assert kernel is None\n"
        "from mamt import engine\n"
        "from mamt.maze import generate_grid_maze\n"
        "r = engine.run_trial(engine.TrialConfig(\n"
        "    maze=generate_grid_maze(5, 5, 0), n=3, strategy='mamt',\n"
        "    solver='dfs', seed=0))\n"
        "print(r.status)\n"
    )
    proc = subprocess.run([sys.executable, "-c", code],
                          capture_output=True, text=True,
                          env={"MAMT_PURE": "1", "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "success"
