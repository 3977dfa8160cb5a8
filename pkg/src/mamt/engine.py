"""Lockstep trial executor: phase scheduling, rule enforcement, tracing.

Each step runs four phases against consistent snapshots: decide, move,
sense/message, heal/transfer.  All decisions in step k read end-of-step-(k-1)
state, so simultaneity is well defined and per-agent computations are order
independent.

Rule violations (collisions, wall moves) are trial outcomes, not exceptions:
they terminate the trial with a fault status.

For the ``mamt`` strategy two execution paths exist: a compiled kernel
(``mamt._core``) for batch sweeps and this module's pure-Python reference
loop, which is also the fallback when the extension is unavailable.  Both
produce identical results; tracing always uses the reference path.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from . import protocol, rng, solvers
from . import world as w
from ._kernel import kernel
from .maze import MazeGraph

SUCCESS = "success"
TIMEOUT = "timeout"
COLLISION_FAULT = "collision_fault"
WALL_FAULT = "wall_fault"

STRATEGIES = ("mamt", "naive", "global_comm", "full_knowledge")

EXIT_CODES = {SUCCESS: 0, COLLISION_FAULT: 2, WALL_FAULT: 2, TIMEOUT: 3}

DEFAULT_STEP_CAP = 10_000


@dataclass
class TrialConfig:
    maze: MazeGraph
    n: int
    strategy: str = "mamt"
    solver: str = "dfs"
    seed: int = 0
    step_cap: int = DEFAULT_STEP_CAP
    record_trace: bool = False
    check_invariants: bool = False
    record_heads: bool = False
    use_kernel: bool | None = None  # None = auto

    def validate(self):
        if self.n < 1:
            raise ValueError("agent count must be >= 1")
        if self.step_cap < 1:
            raise ValueError("step cap must be >= 1")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.solver not in solvers.SOLVER_KINDS:
            raise ValueError(f"unknown solver {self.solver!r}")


@dataclass
class TrialResult:
    status: str
    makespan: int | None
    per_agent_fuel: list
    head_arrival_step: int | None = None
    trace: list | None = None
    invariant_violations: list = field(default_factory=list)
    head_positions: list | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


def apply_moves(world: w.WorldState, targets: dict):
    """Validate and apply one movement phase.

    ``targets`` maps each active agent to its target node (possibly its own).
    Returns a fault status string or None; positions are updated only when
    every rule holds.  Rules: targets adjacent to the source; no edge used
    twice in either direction; no move onto the occupied start node; no two
    agents on one node except start and goal.
    """
    maze = world.maze
    start_occupied = any(
        v == maze.start for i, v in world.positions.items() if i not in world.at_goal
    )
    edges_used = set()
    new_positions = dict(world.positions)
    for i in sorted(targets):
        src, dst = world.positions[i], targets[i]
        if dst == src:
            continue
        if not maze.has_edge(src, dst):
            return WALL_FAULT
        e = (min(src, dst), max(src, dst))
        if e in edges_used:
            return COLLISION_FAULT
        edges_used.add(e)
        if dst == maze.start and start_occupied:
            return COLLISION_FAULT
        new_positions[i] = dst
    seen = {}
    for i, v in new_positions.items():
        if i in world.at_goal or v in (maze.start, maze.goal):
            continue
        if v in seen:
            return COLLISION_FAULT
        seen[v] = i
    world.positions.update(new_positions)
    return None


def check_invariants(world: w.WorldState, agents: dict) -> list:
    """Debug-mode invariant sweep; returns human-readable violation entries."""
    out = []
    maze = world.maze
    active = [i for i in world.agent_ids if i not in world.at_goal]
    heads = [i for i in active if agents[i].leader is None]
    if not world.at_goal:
        # head not yet at the goal: exactly one active head
        if len(heads) != 1:
            out.append(f"head-uniqueness: {len(heads)} active heads {heads}")
    elif heads:
        # the head is always the first to finish; afterwards nobody is head
        out.append(f"head-uniqueness: unexpected heads {heads} after head arrival")
    for i in world.at_goal:
        if world.positions[i] != maze.goal:
            out.append(f"goal-set: agent {i} marked at goal but stands on {world.positions[i]}")
    # leader pointer chains terminate at the head or a finished agent
    for i in active:
        seen = {i}
        cur = i
        while True:
            nxt = agents[cur].leader
            if nxt is None or nxt in world.at_goal:
                break
            if nxt in seen or len(seen) > len(world.positions):
                out.append(f"leader-acyclicity: cycle through agent {i}")
                break
            seen.add(nxt)
            cur = nxt
    # occupancy exclusivity on interior nodes
    occupied_by = {}
    for i in active:
        v = world.positions[i]
        if v in (maze.start, maze.goal):
            continue
        if v in occupied_by:
            out.append(f"occupancy: agents {occupied_by[v]} and {i} share node {v}")
        occupied_by[v] = i
    # communication graph over all agents (beacons included) is connected
    ids = world.agent_ids
    if len(ids) > 1:
        reached = {ids[0]}
        frontier = [ids[0]]
        while frontier:
            a = frontier.pop()
            for b in w.comm_neighbors(world, a):
                if b not in reached:
                    reached.add(b)
                    frontier.append(b)
        if len(reached) != len(ids):
            out.append(f"connectivity: only {len(reached)}/{len(ids)} agents connected")
    return out


@functools.lru_cache(maxsize=128)
def _maze_csr(maze: MazeGraph):
    import numpy as np

    n = maze.node_count
    indptr = np.zeros(n + 1, dtype=np.int32)
    for u in range(n):
        indptr[u + 1] = indptr[u] + len(maze.adjacency[u])
    indices = np.empty(indptr[-1], dtype=np.int32)
    edge_ids = np.empty(indptr[-1], dtype=np.int32)
    eid_of = {}
    k = 0
    for u in range(n):
        for v in maze.adjacency[u]:
            indices[k] = v
            key = (min(u, v), max(u, v))
            if key not in eid_of:
                eid_of[key] = len(eid_of)
            edge_ids[k] = eid_of[key]
            k += 1
    return indptr, indices, edge_ids


def run_trial(config: TrialConfig) -> TrialResult:
    """Execute one trial to completion; a pure function of its configuration."""
    config.validate()
    if config.strategy == "mamt":
        want_kernel = config.use_kernel
        if want_kernel is None:
            want_kernel = kernel is not None and not config.record_trace
        if want_kernel:
            if kernel is None:
                raise RuntimeError("compiled kernel requested but not available")
            if config.record_trace:
                raise RuntimeError("tracing requires the reference path (use_kernel=False)")
            return _run_mamt_kernel(config)
        return _run_mamt_reference(config)
    from . import baselines

    if config.strategy == "naive":
        return baselines.run_naive(config)
    if config.strategy == "global_comm":
        return baselines.run_global_comm(config)
    return baselines.run_full_knowledge(config)


def _run_mamt_kernel(config: TrialConfig) -> TrialResult:
    maze = config.maze
    indptr, indices, edge_ids = _maze_csr(maze)
    solver_kind = {"dfs": 0, "bfs": 1, "random": 2}[config.solver]
    solver_key = rng.stream_key(config.seed, "solver")
    res = kernel.run_mamt(
        indptr,
        indices,
        edge_ids,
        maze.start,
        maze.goal,
        config.n,
        solver_kind,
        solver_key,
        config.step_cap,
        1 if (config.record_heads or config.check_invariants) else 0,
        1 if config.check_invariants else 0,
    )
    violations = []
    if config.check_invariants:
        if res["connectivity_violations"]:
            violations.append(f"connectivity: {res['connectivity_violations']} step(s) disconnected")
        if res["head_violations"]:
            violations.append(f"head-uniqueness: {res['head_violations']} step(s) violated")
    return TrialResult(
        status=res["status"],
        makespan=res["makespan"],
        per_agent_fuel=list(res["fuel"]),
        head_arrival_step=res["head_arrival"],
        invariant_violations=violations,
        head_positions=list(res["heads"]) if config.record_heads else None,
    )


def _head_position(world: w.WorldState, agents: dict):
    for i in world.active_ids():
        if agents[i].leader is None:
            return world.positions[i]
    return world.maze.goal  # head finished; it sits on the goal


def _run_mamt_reference(config: TrialConfig) -> TrialResult:
    maze = config.maze
    start, goal = maze.start, maze.goal
    n = config.n
    ids = list(range(1, n + 1))
    agents, head = protocol.initialize(ids, start, config.solver, config.seed)
    world = w.WorldState(
        maze=maze,
        tick=0,
        positions={i: start for i in ids},
        at_goal=set(),
        rng_key=rng.stream_key(config.seed, "trial"),
    )
    trace = [] if config.record_trace else None
    heads = [] if config.record_heads else None
    violations = []

    outboxes = {i: w.Outbox(i, agents[i].leader) for i in ids}
    inboxes = w.deliver_messages(world, outboxes)
    if trace is not None:
        for i in ids:
            trace.append(
                {"tick": 0, "phase": "init", "agent": i, "position": start,
                 "leader": agents[i].leader, "target": None, "event": "init"}
            )

    head_arrival = None
    makespan = None
    status = TIMEOUT
    for step in range(1, config.step_cap + 1):
        active = world.active_ids()
        occ_nodes = {world.positions[i] for i in active}
        occ_nodes.discard(goal)

        def occupied(u, _occ=frozenset(occ_nodes)):
            return u != goal and u in _occ

        # --- decision phase ---
        decisions = {}
        for i in active:
            a = agents[i]
            d = protocol.decide(a, inboxes[i], occupied, maze.neighbors, start, goal)
            decisions[i] = d
        transfer_to = None
        transfer_payload = None
        transfer_from = None
        for i in active:
            a, d = agents[i], decisions[i]
            a.prev_leader = a.leader
            a.leader = d.leader_after
            a.target = d.move_to
            if a.prev_leader is None:
                # head branch: remember the continuation, no healing target
                a.leader_target = None
                if d.solver_after is not None:
                    a.solver = d.solver_after
                if d.transfer_to is not None:
                    transfer_to, transfer_payload, transfer_from = d.transfer_to, d.transfer_payload, i
                    a.solver = None
            else:
                msg = {m.sender: m for m in inboxes[i]}.get(d.leader_after)
                a.leader_target = msg.arrival_node if msg is not None else None
            if trace is not None:
                event = "hold" if d.move_to == world.positions[i] else "move"
                if d.transfer_to is not None:
                    event = "transfer"
                trace.append(
                    {"tick": step, "phase": "decide", "agent": i, "position": world.positions[i],
                     "leader": a.leader, "target": d.move_to, "event": event}
                )

        # --- movement phase ---
        fault = apply_moves(world, {i: decisions[i].move_to for i in active})
        if fault is not None:
            if trace is not None:
                trace.append({"tick": step, "phase": "move", "agent": None, "position": None,
                              "leader": None, "target": None, "event": fault})
            status = fault
            break
        for i in active:
            a = agents[i]
            moved = world.positions[i] != a.position
            if moved:
                a.fuel += 1
            a.position = world.positions[i]
            if trace is not None and moved:
                trace.append({"tick": step, "phase": "move", "agent": i, "position": a.position,
                              "leader": a.leader, "target": a.target, "event": "move"})
            if a.position == goal:
                world.at_goal.add(i)
                if head_arrival is None:
                    head_arrival = step
                if trace is not None:
                    trace.append({"tick": step, "phase": "move", "agent": i, "position": goal,
                                  "leader": a.leader, "target": None, "event": "arrive"})
        world.tick = step

        # --- sensing and messaging phase ---
        outboxes = {}
        for i in ids:
            ob = w.Outbox(i, agents[i].leader)
            if i == transfer_from:
                ob.transfer_to = transfer_to
                ob.transfer_payload = transfer_payload
            outboxes[i] = ob
        inboxes = w.deliver_messages(world, outboxes)

        # --- heal / head-transfer phase ---
        for i in world.active_ids():
            a = agents[i]
            old_leader = a.leader
            protocol.post_move_update(a, inboxes[i])
            if trace is not None:
                if a.leader is None and old_leader is not None:
                    trace.append({"tick": step, "phase": "update", "agent": i, "position": a.position,
                                  "leader": None, "target": None, "event": "became_head"})
                elif a.leader != old_leader:
                    trace.append({"tick": step, "phase": "update", "agent": i, "position": a.position,
                                  "leader": a.leader, "target": None, "event": "healed"})

        if heads is not None:
            heads.append(_head_position(world, agents))
        if config.check_invariants:
            for v in check_invariants(world, agents):
                violations.append(f"step {step}: {v}")
        if len(world.at_goal) == n:
            status = SUCCESS
            makespan = step
            break

    return TrialResult(
        status=status,
        makespan=makespan,
        per_agent_fuel=[agents[i].fuel for i in ids],
        head_arrival_step=head_arrival,
        trace=trace,
        invariant_violations=violations,
        head_positions=heads,
    )
