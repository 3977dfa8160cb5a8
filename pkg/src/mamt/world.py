"""Per-step global ground truth: positions, occupancy, situated communication.

Agents communicate within their two-hop neighborhood; messages do not pass
through occupied nodes.  Reception is *situated*: each delivered message is
stamped with the node it arrived from as seen by the receiver.

Agents that have reached the goal stay in the model as beacons: they occupy
nothing (the goal is always unoccupied), never move, and keep broadcasting an
``at_goal`` location class so trailing agents can home in on the goal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

AT_START = "at_start"
AT_GOAL = "at_goal"
INTERIOR = "interior"

OCCUPIED = "occupied"
UNOCCUPIED = "unoccupied"


@dataclass
class Message:
    """Situated broadcast as seen by one receiver."""

    sender: int
    location_class: str
    leader_of_sender: int | None
    arrival_node: int
    payload: dict | None = None  # head-transfer record, addressed copies only


@dataclass
class Outbox:
    """One agent's broadcast draft for the messaging phase."""

    sender: int
    leader: int | None
    transfer_to: int | None = None
    transfer_payload: dict | None = None


@dataclass
class WorldState:
    """Global truth at one time step.  Mutated only by the engine between phases."""

    maze: object
    tick: int = 0
    positions: dict = field(default_factory=dict)  # agent id -> NodeId
    at_goal: set = field(default_factory=set)  # agent ids parked on the goal
    rng_key: int = 0

    @property
    def agent_ids(self):
        return sorted(self.positions)

    def active_ids(self):
        return [i for i in sorted(self.positions) if i not in self.at_goal]

    def location_class(self, i: int) -> str:
        v = self.positions[i]
        if v == self.maze.start:
            return AT_START
        if v == self.maze.goal:
            return AT_GOAL
        return INTERIOR


def node_status(world: WorldState, u: int) -> str:
    """Occupied iff a not-yet-finished agent stands on u; the goal never is."""
    if u == world.maze.goal:
        return UNOCCUPIED
    for i, v in world.positions.items():
        if v == u and i not in world.at_goal:
            return OCCUPIED
    return UNOCCUPIED


def is_occupied(world: WorldState, u: int) -> bool:
    return node_status(world, u) == OCCUPIED


def comm_neighbors(world: WorldState, i: int) -> set:
    """Agents j reachable from i: co-located, adjacent, or with a shared
    unoccupied neighbor node between them."""
    vi = world.positions[i]
    out = set()
    for j, vj in world.positions.items():
        if j == i:
            continue
        if vi == vj or world.maze.has_edge(vi, vj):
            out.add(j)
        elif _shared_unoccupied(world, vi, vj) is not None:
            out.add(j)
    return out


def _shared_unoccupied(world: WorldState, a: int, b: int):
    # In a tree two distinct nodes share at most one common neighbor.
    common = set(world.maze.neighbors(a)) & set(world.maze.neighbors(b))
    for m in common:
        if not is_occupied(world, m):
            return m
    return None


def node_towards(world: WorldState, i: int, j: int):
    """The node from which i receives j's messages, or None when out of range."""
    vi, vj = world.positions[i], world.positions[j]
    if vi == vj or world.maze.has_edge(vi, vj):
        return vj
    return _shared_unoccupied(world, vi, vj)


def deliver_messages(world: WorldState, outboxes: dict) -> dict:
    """Reliable, loss-free delivery over the current communication graph.

    Returns one inbox list per agent, ordered by ascending sender id.  Each
    message is stamped with the receiver's own arrival node; a head-transfer
    payload rides only on the copy delivered to its addressee.
    """
    inboxes = {}
    for i in world.agent_ids:
        inbox = []
        for j in sorted(comm_neighbors(world, i)):
            draft = outboxes[j]
            inbox.append(
                Message(
                    sender=j,
                    location_class=world.location_class(j),
                    leader_of_sender=draft.leader,
                    arrival_node=node_towards(world, i, j),
                    payload=draft.transfer_payload if draft.transfer_to == i else None,
                )
            )
        inboxes[i] = inbox
    return inboxes
