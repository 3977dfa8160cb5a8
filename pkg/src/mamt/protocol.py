"""Per-agent state machine for leader-switching tree-maze traversal.

Exactly one *head* agent (leader pointer ``None``) runs a single-agent solver;
every other agent picks a neighboring agent as its leader and tracks it.  When
the solver directs the head onto a node that will be occupied, the head stays
put and hands the head role (plus the serialized solver continuation) to that
occupant, so the sequence of head positions reproduces the solo run
step-for-step.

All decisions here read only the agent's own state and its inbox from the
previous messaging phase; agents can be evaluated in any order within a phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import solvers, world as w


def selector(ids) -> int:
    """Deterministic id choice shared by all agents: the minimum."""
    assert ids, "selector over an empty id set is a caller bug"
    return min(ids)


@dataclass
class AgentState:
    id: int
    position: int
    leader: int | None = None  # None == head role
    prev_leader: int | None = None  # leader before the last conflict resolution
    target: int | None = None  # move target chosen in the last decision
    leader_target: int | None = None  # last node-towards-leader (used for healing)
    solver: object | None = None  # head only
    fuel: int = 0
    known_leaders: dict = field(default_factory=dict)

    @property
    def is_head(self) -> bool:
        return self.leader is None


@dataclass
class Decision:
    move_to: int
    leader_after: int | None
    transfer_to: int | None = None
    transfer_payload: dict | None = None
    solver_after: object | None = None


def initialize(ids, start: int, solver_kind: str, trial_seed: int):
    """All agents at the start node elect the minimum id as head.

    Every agent sees every other one (co-located), so each computes the same
    head and also infers every neighbor's leader pointer.
    """
    ids = sorted(ids)
    head = selector(ids)
    agents = {}
    for i in ids:
        agents[i] = AgentState(
            id=i,
            position=start,
            leader=None if i == head else head,
            solver=solvers.new_solver_state(solver_kind, trial_seed) if i == head else None,
            known_leaders={j: (None if j == head else head) for j in ids if j != i},
        )
    return agents, head


def _by_sender(inbox) -> dict:
    return {m.sender: m for m in inbox}


def _leader_at_start(a_msg, inbox_by_sender, me: int, my_class: str) -> bool:
    """Whether the candidate's leader stands on the start node, as far as the
    receiving agent can tell from its inbox.

    A head candidate has no leader and passes.  If the leader is out of range
    it cannot be on the start node: a visible agent at the start with a
    co-located leader always has that leader in range too.
    """
    la = a_msg.leader_of_sender
    if la is None:
        return False
    if la == me:
        return my_class == w.AT_START
    la_msg = inbox_by_sender.get(la)
    return la_msg is not None and la_msg.location_class == w.AT_START


def competing_agents(me: int, my_pos: int, my_class: str, inbox, exclude_leader, U) -> set:
    """Filtered candidate set shared by head transfer and conflict resolution.

    A neighbor a competes iff: it (or its leader) has left the start node, it
    is not the current leader unless co-located with us, its message arrived
    from a node in U, and it is not at the goal.
    """
    inbox_by_sender = _by_sender(inbox)
    out = set()
    for a, m in inbox_by_sender.items():
        if m.location_class == w.AT_GOAL:
            continue
        if m.arrival_node not in U:
            continue
        if exclude_leader is not None and a == exclude_leader and m.arrival_node != my_pos:
            continue
        if m.location_class == w.AT_START and _leader_at_start(m, inbox_by_sender, me, my_class):
            continue
        out.add(a)
    return out


def resolve_leader_conflict(agent: AgentState, inbox, my_class: str) -> int:
    """Keep or re-point the leader when several agents chase the same one."""
    L = agent.leader
    inbox_by_sender = _by_sender(inbox)
    msg = inbox_by_sender.get(L)
    U = {agent.position}
    if msg is not None:
        U.add(msg.arrival_node)
    R = competing_agents(agent.id, agent.position, my_class, inbox, L, U)
    chosen = selector(R | {agent.id})
    return L if chosen == agent.id else chosen


def decide(agent: AgentState, inbox, occupied, neighbors, start: int, goal: int) -> Decision:
    """One decision step: where to move, and whether to hand off the head role.

    ``occupied`` is the local occupancy predicate over the step-start snapshot;
    it is only ever consulted for nodes adjacent to the agent.
    """
    pos = agent.position
    my_class = w.AT_START if pos == start else (w.AT_GOAL if pos == goal else w.INTERIOR)
    if agent.is_head:
        d_solver, solver_after = solvers.solver_next(agent.solver, pos, neighbors(pos))
        H = competing_agents(agent.id, pos, my_class, inbox, None, {d_solver})
        if not H:
            return Decision(move_to=d_solver, leader_after=None, solver_after=solver_after)
        new_head = selector(H)
        return Decision(
            move_to=pos,
            leader_after=new_head,
            transfer_to=new_head,
            transfer_payload=solvers.serialize_solver_state(solver_after),
        )

    new_leader = resolve_leader_conflict(agent, inbox, my_class)
    inbox_by_sender = _by_sender(inbox)
    msg = inbox_by_sender.get(new_leader)
    d_l = msg.arrival_node if msg is not None else None
    move_to = pos
    if new_leader == agent.leader and d_l is not None:
        if msg.location_class == w.AT_GOAL or not occupied(d_l):
            move_to = d_l
    return Decision(move_to=move_to, leader_after=new_leader)


def post_move_update(agent: AgentState, inbox) -> AgentState:
    """After movement and messaging: heal a severed leader link, accept a
    transferred head role, and refresh the leader knowledge map."""
    inbox_by_sender = _by_sender(inbox)
    agent.known_leaders = {a: m.leader_of_sender for a, m in inbox_by_sender.items()}
    if agent.leader is not None and agent.leader not in inbox_by_sender:
        # Communication to the leader was blocked or it moved out of range:
        # re-point to whoever is now reachable via the old target node.  With
        # no candidate, hold position and retry next step.
        if agent.leader_target is not None:
            cands = {a for a, m in inbox_by_sender.items() if m.arrival_node == agent.leader_target}
            if cands:
                agent.leader = selector(cands)
    for m in inbox:
        if m.payload is not None:
            agent.leader = None
            agent.solver = solvers.deserialize_solver_state(m.payload)
    return agent
