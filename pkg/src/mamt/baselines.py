"""Comparison strategies: naive independent solving, global-communication
sequential exploration, and full-knowledge shortest-path streaming.

All three reuse the engine's movement validation; safety is enforced by the
engine, never trusted to the strategy.
"""

from __future__ import annotations

from collections import deque

from . import engine, rng, solvers
from . import world as w


# --------------------------------------------------------------------------
# naive: every agent runs its own solver; occupied neighbors look like walls

def naive_decide(solver_state, position, full_view, blocked):
    """One naive agent's proposal with ``blocked`` nodes masked out as walls.

    Returns (target, continuation); target == position means waiting, and the
    continuation is then left unchanged.
    """
    if isinstance(solver_state, solvers.DfsState):
        for u in solvers.dfs_preference(solver_state.came_from, list(full_view)):
            if u not in blocked:
                return u, solvers.DfsState(came_from=position)
        return position, solver_state
    if isinstance(solver_state, solvers.BfsState):
        nxt, nstate = solvers.solver_next(solver_state, position, full_view)
        if nxt in blocked:
            return position, solver_state
        return nxt, nstate
    if isinstance(solver_state, solvers.RandomState):
        choices = [u for u in full_view if u not in blocked]
        if not choices:
            return position, solver_state
        nxt = choices[rng.draw(solver_state.key, solver_state.count) % len(choices)]
        return nxt, solvers.RandomState(key=solver_state.key, count=solver_state.count + 1)
    raise TypeError(f"not a solver state: {solver_state!r}")


def run_naive(config: engine.TrialConfig) -> engine.TrialResult:
    maze = config.maze
    start, goal = maze.start, maze.goal
    ids = list(range(1, config.n + 1))
    states = {
        i: solvers.new_solver_state(config.solver, rng.stream_key(config.seed, "naive", i))
        for i in ids
    }
    world = w.WorldState(maze=maze, positions={i: start for i in ids})
    fuel = {i: 0 for i in ids}
    head_arrival = None
    status, makespan = engine.TIMEOUT, None
    for step in range(1, config.step_cap + 1):
        active = world.active_ids()
        before = {i: world.positions[i] for i in active}
        occ = {v for v in before.values()}
        occ.discard(goal)
        masks = {i: set() for i in active}
        targets, nexts = {}, {}

        def propose(i):
            pos = before[i]
            blocked = {u for u in maze.neighbors(pos) if u in occ} | masks[i]
            targets[i], nexts[i] = naive_decide(states[i], pos, maze.neighbors(pos), blocked)

        for i in active:
            propose(i)
        # Conflicting claims: interior nodes hold one agent, so any two
        # claimants clash; start/goal hold crowds, so only claimants sharing
        # the entry edge (co-located agents) clash.  The highest id moves,
        # the rest treat the node as an obstacle and re-decide.  Claimants
        # are always mutual communication neighbors (co-located or joined by
        # the contested node), so the claim exchange rides the same situated
        # two-hop channel the main protocol uses.
        while True:
            claims = {}
            for i in active:
                t = targets[i]
                if t == before[i]:
                    continue
                key = (t, before[i]) if t in (start, goal) else (t,)
                claims.setdefault(key, []).append(i)
            losers = []
            for key, claimants in claims.items():
                if len(claimants) > 1:
                    winner = max(claimants)
                    for i in claimants:
                        if i != winner:
                            masks[i].add(key[0])
                            losers.append(i)
            if not losers:
                break
            for i in losers:
                propose(i)
        fault = engine.apply_moves(world, targets)
        if fault is not None:
            status = fault
            break
        for i in active:
            if world.positions[i] != before[i]:
                fuel[i] += 1
                states[i] = nexts[i]
                if world.positions[i] == goal:
                    world.at_goal.add(i)
                    if head_arrival is None:
                        head_arrival = step
        world.tick = step
        if len(world.at_goal) == len(ids):
            status, makespan = engine.SUCCESS, step
            break
    return engine.TrialResult(status, makespan, [fuel[i] for i in ids], head_arrival)


# --------------------------------------------------------------------------
# global communication: shared visited map, one agent moves per time step

def nearest_frontier_step(maze, visited, origin):
    """First step from ``origin`` towards the nearest visited node that still
    has an unexplored neighbor; breadth-first over the visited subgraph with
    ties broken by neighbor order.  None if no frontier is reachable."""
    parent = {origin: None}
    queue = deque([origin])
    while queue:
        u = queue.popleft()
        if u != origin and any(v not in visited for v in maze.neighbors(u)):
            step = u
            while parent[step] != origin:
                step = parent[step]
            return step
        for v in maze.neighbors(u):
            if v in visited and v not in parent:
                parent[v] = u
                queue.append(v)
    return None


def global_comm_step(maze, world, blackboard, turn_agent):
    """Compute the turn agent's move (or None to forfeit) and update the
    shared blackboard when the move is taken by the caller.

    blackboard: dict with keys ``visited`` (set) and ``goal_found`` (bool).
    """
    u = world.positions[turn_agent]
    occ = {world.positions[i] for i in world.active_ids() if i != turn_agent}
    occ.discard(maze.goal)
    if blackboard["goal_found"]:
        t = blackboard["hop"][u]
        return t if (t == maze.goal or t not in occ) else None
    for v in maze.neighbors(u):
        if v not in blackboard["visited"]:
            return v  # unexplored implies unoccupied: agents stand on visited nodes
    t = nearest_frontier_step(maze, blackboard["visited"], u)
    if t is None or (t != maze.goal and t in occ):
        return None
    return t


def run_global_comm(config: engine.TrialConfig) -> engine.TrialResult:
    maze = config.maze
    start, goal = maze.start, maze.goal
    ids = list(range(1, config.n + 1))
    world = w.WorldState(maze=maze, positions={i: start for i in ids})
    blackboard = {"visited": {start}, "goal_found": False, "hop": None}
    fuel = {i: 0 for i in ids}
    head_arrival = None
    status, makespan = engine.TIMEOUT, None
    last_turn = 0
    for step in range(1, config.step_cap + 1):
        active = world.active_ids()
        later = [i for i in active if i > last_turn]
        turn_agent = later[0] if later else active[0]
        last_turn = turn_agent
        t = global_comm_step(maze, world, blackboard, turn_agent)
        if t is not None:
            fault = engine.apply_moves(world, {turn_agent: t})
            if fault is not None:
                status = fault
                break
            fuel[turn_agent] += 1
            blackboard["visited"].add(t)
            if t == goal:
                if not blackboard["goal_found"]:
                    blackboard["goal_found"] = True
                    blackboard["hop"] = maze.next_hop_towards(goal)
                world.at_goal.add(turn_agent)
                if head_arrival is None:
                    head_arrival = step
        world.tick = step
        if len(world.at_goal) == len(ids):
            status, makespan = engine.SUCCESS, step
            break
    return engine.TrialResult(status, makespan, [fuel[i] for i in ids], head_arrival)


# --------------------------------------------------------------------------
# full knowledge: stream along the unique shortest path, lowest id first

def full_knowledge_decide(agent_id, position, hop, occupied_snapshot, start, lowest_at_start):
    """Target for one fully informed agent, or its own position to wait."""
    t = hop[position]
    if position == start and agent_id != lowest_at_start:
        return position
    if t in occupied_snapshot:
        return position
    return t


def run_full_knowledge(config: engine.TrialConfig) -> engine.TrialResult:
    maze = config.maze
    start, goal = maze.start, maze.goal
    hop = maze.next_hop_towards(goal)
    ids = list(range(1, config.n + 1))
    world = w.WorldState(maze=maze, positions={i: start for i in ids})
    fuel = {i: 0 for i in ids}
    head_arrival = None
    status, makespan = engine.TIMEOUT, None
    for step in range(1, config.step_cap + 1):
        active = world.active_ids()
        occ = {world.positions[i] for i in active}
        occ.discard(goal)
        at_start = [i for i in active if world.positions[i] == start]
        lowest = min(at_start) if at_start else None
        targets = {}
        for i in active:
            targets[i] = full_knowledge_decide(i, world.positions[i], hop, occ, start, lowest)
        before = {i: world.positions[i] for i in active}
        fault = engine.apply_moves(world, targets)
        if fault is not None:
            status = fault
            break
        for i in active:
            if world.positions[i] != before[i]:
                fuel[i] += 1
                if world.positions[i] == goal:
                    world.at_goal.add(i)
                    if head_arrival is None:
                        head_arrival = step
        world.tick = step
        if len(world.at_goal) == len(ids):
            status, makespan = engine.SUCCESS, step
            break
    return engine.TrialResult(status, makespan, [fuel[i] for i in ids], head_arrival)
