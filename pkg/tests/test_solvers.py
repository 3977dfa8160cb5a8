import random
from collections import deque

import pytest

from mamt import maze, rng, solvers
from conftest import make_path, make_star4, random_tree_maze


def assert_valid_trajectory(m, traj):
    assert traj[0] == m.start
    for u, v in zip(traj, traj[1:]):
        assert m.has_edge(u, v)


# --- dfs ----------------------------------------------------------------


def test_dfs_preference_cyclic_successor():
    view = [10, 20, 30]
    assert solvers.dfs_preference(None, view) == [10, 20, 30]
    assert solvers.dfs_preference(20, view) == [30, 10, 20]
    assert solvers.dfs_preference(30, view) == [10, 20, 30]


def test_dfs_star4_trajectory():
    run = solvers.run_solo(make_star4(), "dfs")
    assert run.trajectory == [0, 1, 0, 2, 3]
    assert run.fuel == 4 and run.reached_goal


def test_dfs_reaches_goal_within_euler_bound():
    rng_ = random.Random(13)
    for _ in range(40):
        n = rng_.randrange(4, 40)
        m = random_tree_maze(rng_, n)
        run = solvers.run_solo(m, "dfs")
        assert run.reached_goal
        assert run.fuel <= 2 * (n - 1)
        assert_valid_trajectory(m, run.trajectory)


# --- bfs ----------------------------------------------------------------


def bfs_order_oracle(m):
    """Discovery order of a plain queue-based search from the start."""
    order = [m.start]
    seen = {m.start}
    q = deque([m.start])
    while q:
        u = q.popleft()
        for v in m.neighbors(u):
            if v not in seen:
                seen.add(v)
                order.append(v)
                q.append(v)
    return order


def first_visit_order(traj):
    seen = set()
    out = []
    for v in traj:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def test_bfs_discovery_order_matches_queue_oracle():
    rng_ = random.Random(29)
    for _ in range(25):
        m = random_tree_maze(rng_, rng_.randrange(5, 30))
        # let the notional agent sweep the whole tree, ignoring the goal
        state = solvers.new_solver_state("bfs")
        current = m.start
        traj = [current]
        for _ in range(4 * m.node_count * m.node_count):
            try:
                current, state = solvers.solver_next(state, current, m.neighbors(current))
            except RuntimeError:
                break  # queue exhausted: everything visited
            traj.append(current)
        assert set(traj) == set(range(m.node_count))
        oracle = bfs_order_oracle(m)
        assert first_visit_order(traj) == oracle
        assert_valid_trajectory(m, traj)


def test_bfs_reaches_goal_on_random_trees():
    rng_ = random.Random(31)
    for _ in range(20):
        m = random_tree_maze(rng_, rng_.randrange(4, 35))
        run = solvers.run_solo(m, "bfs")
        assert run.reached_goal
        assert_valid_trajectory(m, run.trajectory)


# --- random walk --------------------------------------------------------


CHI2_CRIT = {1: 6.635, 2: 9.210, 3: 11.345}  # alpha = 0.01


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_random_walk_uniform_over_neighbors(degree):
    view = list(range(1, degree + 1))
    key = rng.stream_key(degree, "solver")
    state = solvers.RandomState(key=key, count=0)
    counts = {v: 0 for v in view}
    draws = 6000
    for _ in range(draws):
        nxt, state = solvers.solver_next(state, 0, view)
        counts[nxt] += 1
    expected = draws / degree
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < CHI2_CRIT[degree - 1]


def test_random_walk_respects_step_cap():
    m = maze.generate_grid_maze(10, 10, seed=0)
    run = solvers.run_solo(m, "random", seed=1, step_cap=50)
    assert len(run.trajectory) <= 51
    if not run.reached_goal:
        assert run.trajectory[-1] != m.goal


def test_random_walk_seed_sensitivity():
    m = maze.generate_grid_maze(6, 6, seed=2)
    a = solvers.run_solo(m, "random", seed=1, step_cap=200).trajectory
    b = solvers.run_solo(m, "random", seed=1, step_cap=200).trajectory
    c = solvers.run_solo(m, "random", seed=2, step_cap=200).trajectory
    assert a == b
    assert a != c


# --- serialization and checkpointing ------------------------------------


@pytest.mark.parametrize("kind", solvers.SOLVER_KINDS)
def test_checkpoint_resume_identical_suffix(kind):
    m = maze.generate_grid_maze(8, 8, seed=6)
    baseline = solvers.run_solo(m, kind, seed=9, step_cap=300).trajectory
    for cut in (1, 7, len(baseline) // 2):
        state = solvers.new_solver_state(kind, 9)
        current = m.start
        traj = [current]
        for step in range(len(baseline) - 1):
            if step == cut:
                # ship the state through its wire format mid-run
                state = solvers.deserialize_solver_state(
                    solvers.serialize_solver_state(state)
                )
            current, state = solvers.solver_next(state, current, m.neighbors(current))
            traj.append(current)
            if current == m.goal:
                break
        assert traj == baseline


def test_serialize_round_trip_values():
    s = solvers.BfsState(visited=frozenset({1, 2}), parent=((2, 1),), queue=(3,), path=(2, 3))
    assert solvers.deserialize_solver_state(solvers.serialize_solver_state(s)) == s
    d = solvers.DfsState(came_from=4)
    assert solvers.deserialize_solver_state(solvers.serialize_solver_state(d)) == d


def test_deserialize_rejects_garbage():
    with pytest.raises(ValueError):
        solvers.deserialize_solver_state({"kind": "nope"})
    with pytest.raises(ValueError):
        solvers.deserialize_solver_state({"kind": "bfs"})


def test_new_solver_state_rejects_unknown_kind():
    with pytest.raises(ValueError):
        solvers.new_solver_state("astar")
