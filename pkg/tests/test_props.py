"""Property tests over random trees: the protocol always finishes cleanly."""

from hypothesis import given, settings, strategies as st

from mamt import engine, maze, solvers
from conftest import prufer_tree

SOLVERS = ("dfs", "bfs")


@st.composite
def tree_mazes(draw):
    v = draw(st.integers(min_value=4, max_value=24))
    seq = draw(st.lists(st.integers(min_value=0, max_value=v - 1),
                        min_size=v - 2, max_size=v - 2))
    edges = prufer_tree(seq, v)
    start = draw(st.integers(min_value=0, max_value=v - 1))
    goal = draw(st.integers(min_value=0, max_value=v - 2))
    if goal >= start:
        goal += 1
    return maze.build_maze(v, edges, start, goal)


@settings(max_examples=60, deadline=None)
@given(mz=tree_mazes(), n=st.integers(min_value=1, max_value=8),
       solver=st.sampled_from(SOLVERS), seed=st.integers(0, 2**31))
def test_reference_run_succeeds_cleanly(mz, n, solver, seed):
    r = engine.run_trial(engine.TrialConfig(
        maze=mz, n=n, strategy="mamt", solver=solver, seed=seed,
        record_heads=True, check_invariants=True, use_kernel=False))
    assert r.status == "success"
    assert r.invariant_violations == []
    assert r.makespan is not None and r.head_arrival_step <= r.makespan
    d = mz.distance(mz.start, mz.goal)
    assert all(f >= d for f in r.per_agent_fuel)
    # head trajectory is exactly the solo solver's walk
    solo = solvers.run_solo(mz, solver, seed).trajectory
    assert r.head_positions[: len(solo) - 1] == solo[1:]


@settings(max_examples=30, deadline=None)
@given(mz=tree_mazes(), n=st.integers(min_value=1, max_value=8),
       solver=st.sampled_from(SOLVERS), seed=st.integers(0, 2**31))
def test_kernel_matches_reference(mz, n, solver, seed):
    from mamt._kernel import kernel
    if kernel is None:
        return
    kw = dict(maze=mz, n=n, strategy="mamt", solver=solver, seed=seed,
              record_heads=True, check_invariants=True)
    a = engine.run_trial(engine.TrialConfig(use_kernel=True, **kw))
    b = engine.run_trial(engine.TrialConfig(use_kernel=False, **kw))
    assert a == b


@settings(max_examples=30, deadline=None)
@given(mz=tree_mazes(), n=st.integers(min_value=1, max_value=6),
       strategy=st.sampled_from(("naive", "full_knowledge")),
       seed=st.integers(0, 2**31))
def test_baselines_never_fault(mz, n, strategy, seed):
    r = engine.run_trial(engine.TrialConfig(
        maze=mz, n=n, strategy=strategy, solver="dfs", seed=seed))
    assert r.status == "success"
