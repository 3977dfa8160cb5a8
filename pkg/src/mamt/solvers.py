"""Single-agent maze solvers with serializable continuation state.

Each solver is a pure step function: ``solver_next(state, current, view)``
returns the adjacent node to move to plus the continuation state *after* that
move.  States are value objects, never mutated in place, so a traversal can be
checkpointed at any step, shipped inside a message, and resumed elsewhere with
an identical remaining trajectory.

Kinds:

* ``dfs``    - wall-following depth-first walk.  The next edge is the cyclic
  successor of the arrival edge in the node's fixed neighbor order (first
  neighbor when starting fresh).  O(1) state; on a tree this visits every
  node within 2(V-1) moves and backtracks out of dead ends.
* ``bfs``    - physical breadth-first search.  A discovery queue is seeded
  with the start node's neighbors in order; the agent walks the unique tree
  path to each queued node in turn, appending newly sensed neighbors.
* ``random`` - uniform choice among adjacent nodes, driven by a counter-based
  stream so the state is two integers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import rng

SOLVER_KINDS = ("dfs", "bfs", "random")


@dataclass(frozen=True)
class DfsState:
    kind = "dfs"
    came_from: int | None = None


@dataclass(frozen=True)
class BfsState:
    kind = "bfs"
    visited: frozenset = frozenset()
    parent: tuple = ()  # ((child, parent), ...) discovery tree
    queue: tuple = ()  # nodes discovered, not yet physically visited
    path: tuple = ()  # remainder of the walk to the current target


@dataclass(frozen=True)
class RandomState:
    kind = "random"
    key: int = 0
    count: int = 0


def new_solver_state(kind: str, seed: int = 0):
    if kind == "dfs":
        return DfsState()
    if kind == "bfs":
        return BfsState()
    if kind == "random":
        return RandomState(key=rng.stream_key(seed, "solver"), count=0)
    raise ValueError(f"unknown solver kind {kind!r}")


def dfs_preference(came_from: int | None, view) -> list:
    """Neighbor candidates in wall-following order: cyclic successors of the
    arrival edge (the arrival edge itself comes last, i.e. backtracking is the
    final resort).  With no arrival edge the order is the view itself."""
    if came_from is None:
        return list(view)
    i = view.index(came_from)
    return [view[(i + k) % len(view)] for k in range(1, len(view) + 1)]


def _bfs_walk(parent: dict, a: int, b: int) -> list:
    """Unique path a..b inside the discovery tree (parent maps child -> parent)."""
    anc = [a]
    while anc[-1] in parent:
        anc.append(parent[anc[-1]])
    index = {v: i for i, v in enumerate(anc)}
    chain = [b]
    while chain[-1] not in index:
        chain.append(parent[chain[-1]])
    meet = index[chain[-1]]
    return anc[: meet + 1] + list(reversed(chain[:-1]))


def solver_next(state, current: int, view):
    """Propose the next node from ``current`` given its ordered adjacent nodes.

    Returns (next_node, continuation_state_after_the_move).  Solvers never
    propose staying put.
    """
    if not view:
        raise ValueError("current node has no neighbors")
    if isinstance(state, DfsState):
        nxt = dfs_preference(state.came_from, list(view))[0]
        return nxt, DfsState(came_from=current)
    if isinstance(state, BfsState):
        visited = state.visited
        parent = dict(state.parent)
        queue = state.queue
        if current not in visited:
            # Arrived at a discovery target: sense and enqueue new neighbors.
            visited = visited | {current}
            fresh = [u for u in view if u not in visited and u not in parent]
            for u in fresh:
                parent[u] = current
            queue = queue + tuple(fresh)
        path = state.path
        if not path:
            if not queue:
                raise RuntimeError("breadth-first discovery queue exhausted before the goal")
            target, queue = queue[0], queue[1:]
            path = tuple(_bfs_walk(parent, current, target)[1:])
        nxt, path = path[0], path[1:]
        return nxt, BfsState(visited=visited, parent=tuple(sorted(parent.items())), queue=queue, path=path)
    if isinstance(state, RandomState):
        nxt = view[rng.draw(state.key, state.count) % len(view)]
        return nxt, replace(state, count=state.count + 1)
    raise TypeError(f"not a solver state: {state!r}")


def serialize_solver_state(state) -> dict:
    """Lossless, JSON-compatible payload (embeddable in a head-transfer message)."""
    if isinstance(state, DfsState):
        return {"kind": "dfs", "came_from": state.came_from}
    if isinstance(state, BfsState):
        return {
            "kind": "bfs",
            "visited": sorted(state.visited),
            "parent": [list(p) for p in state.parent],
            "queue": list(state.queue),
            "path": list(state.path),
        }
    if isinstance(state, RandomState):
        return {"kind": "random", "key": state.key, "count": state.count}
    raise TypeError(f"not a solver state: {state!r}")


def deserialize_solver_state(payload: dict):
    try:
        kind = payload["kind"]
        if kind == "dfs":
            came_from = payload["came_from"]
            return DfsState(came_from=None if came_from is None else int(came_from))
        if kind == "bfs":
            return BfsState(
                visited=frozenset(int(v) for v in payload["visited"]),
                parent=tuple((int(c), int(p)) for c, p in payload["parent"]),
                queue=tuple(int(v) for v in payload["queue"]),
                path=tuple(int(v) for v in payload["path"]),
            )
        if kind == "random":
            return RandomState(key=int(payload["key"]), count=int(payload["count"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed solver payload: {exc}") from None
    raise ValueError(f"malformed solver payload: unknown kind {kind!r}")


@dataclass
class SoloRun:
    """Trajectory of one notional agent from start towards goal."""

    trajectory: list
    reached_goal: bool

    @property
    def fuel(self) -> int:
        return len(self.trajectory) - 1


def run_solo(maze, kind: str, seed: int = 0, step_cap: int | None = None) -> SoloRun:
    """Run a solver alone on the maze from start until the goal or the cap.

    ``random`` defaults to a 10,000-step cap and may return a truncated
    trajectory (``reached_goal`` False).  dfs/bfs terminate on any tree; a
    generous internal cap guards against bugs.
    """
    if step_cap is None:
        step_cap = 10_000 if kind == "random" else 4 * maze.node_count * maze.node_count + 16
    state = new_solver_state(kind, seed)
    current = maze.start
    trajectory = [current]
    while current != maze.goal and len(trajectory) - 1 < step_cap:
        current, state = solver_next(state, current, maze.neighbors(current))
        trajectory.append(current)
    if current != maze.goal and kind != "random":
        raise RuntimeError(f"{kind} failed to reach the goal within {step_cap} steps")
    return SoloRun(trajectory, current == maze.goal)
