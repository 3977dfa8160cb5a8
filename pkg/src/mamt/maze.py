"""Tree-shaped maze graphs: generation, path queries, and serialization.

A maze is a connected acyclic graph with distinguished start and goal nodes.
Every node carries a fixed ordered neighbor list; the order is derived from a
single canonical rule per maze so that every consumer (solvers, agents,
renderers) sees the same total order:

* ``compass`` - grid mazes; neighbors sorted North, East, South, West
  (row decreasing, col increasing, row increasing, col decreasing).
* ``angle``   - geometric mazes; ascending angle from the positive x axis
  (y grows downward), ties broken by node id.
* ``index``   - no layout; ascending node id.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

NodeId = int


class MazeError(ValueError):
    """Invalid maze structure or generation parameters."""


class MazeFormatError(MazeError):
    """Malformed maze file; carries the offending field or line."""

    def __init__(self, message: str, field_name: str | None = None):
        super().__init__(message if field_name is None else f"{field_name}: {message}")
        self.field_name = field_name


ORDER_RULES = ("compass", "angle", "index")


@dataclass(frozen=True)
class MazeGraph:
    """Immutable tree maze. Safe to share across concurrent trials."""

    adjacency: tuple  # tuple[tuple[NodeId, ...], ...], canonical order
    start: NodeId
    goal: NodeId
    coords: tuple | None = None  # tuple[tuple[float, float], ...]
    order_rule: str = "index"
    grid_shape: tuple | None = None  # (width, height) for grid mazes

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def neighbors(self, u: NodeId) -> tuple:
        return self.adjacency[u]

    def edges(self):
        """Undirected edge list as (u, v) with u < v, ascending."""
        out = []
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    out.append((u, v))
        out.sort()
        return out

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        return v in self.adjacency[u]

    def tree_path(self, a: NodeId, b: NodeId) -> list:
        """The unique simple path from a to b, inclusive of both endpoints."""
        n = self.node_count
        if not (0 <= a < n and 0 <= b < n):
            raise MazeError(f"node out of range: {a if not 0 <= a < n else b}")
        if a == b:
            return [a]
        parent = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            if u == b:
                break
            for v in self.adjacency[u]:
                if v not in parent:
                    parent[v] = u
                    stack.append(v)
        path = [b]
        while path[-1] != a:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def distance(self, a: NodeId, b: NodeId) -> int:
        return len(self.tree_path(a, b)) - 1

    def next_hop_towards(self, target: NodeId) -> list:
        """Per-node next node on the unique path to ``target`` (target maps to itself)."""
        hop = [0] * self.node_count
        hop[target] = target
        stack = [target]
        seen = {target}
        while stack:
            u = stack.pop()
            for v in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    hop[v] = u
                    stack.append(v)
        return hop


def _canonical_order(nbrs, u, coords, order_rule):
    if order_rule == "index" or coords is None:
        return sorted(nbrs)
    if order_rule == "compass":
        ux, uy = coords[u]

        def compass(v):
            dx, dy = coords[v][0] - ux, coords[v][1] - uy
            if (abs(dx) + abs(dy)) != 1 or (dx and dy):
                raise MazeError(f"compass order needs unit grid steps at node {u}")
            return {(0, -1): 0, (1, 0): 1, (0, 1): 2, (-1, 0): 3}[(dx, dy)]

        return sorted(nbrs, key=compass)
    if order_rule == "angle":
        ux, uy = coords[u]
        return sorted(nbrs, key=lambda v: (math.atan2(coords[v][1] - uy, coords[v][0] - ux) % (2 * math.pi), v))
    raise MazeError(f"unknown order rule {order_rule!r}")


def build_maze(node_count, edges, start, goal, coords=None, order_rule=None, grid_shape=None) -> MazeGraph:
    """Validate a tree edge set and assemble a MazeGraph with canonical neighbor order."""
    if node_count < 2:
        raise MazeError("a maze needs at least 2 nodes")
    if order_rule is None:
        order_rule = "angle" if coords is not None else "index"
    if order_rule not in ORDER_RULES:
        raise MazeFormatError(f"unknown value {order_rule!r}", "order")
    if not (0 <= start < node_count):
        raise MazeFormatError("out of range", "start")
    if not (0 <= goal < node_count):
        raise MazeFormatError("out of range", "goal")
    if start == goal:
        raise MazeFormatError("start equals goal", "goal")
    if coords is not None and len(coords) != node_count:
        raise MazeFormatError("length differs from node count", "coords")
    if len(edges) != node_count - 1:
        raise MazeFormatError(
            f"{len(edges)} edges for {node_count} nodes; a tree needs exactly "
            f"{node_count - 1} (cycle or disconnection)",
            "edges",
        )
    nbrs = [set() for _ in range(node_count)]
    for e in edges:
        try:
            u, v = int(e[0]), int(e[1])
        except (TypeError, ValueError, IndexError):
            raise MazeFormatError(f"malformed edge {e!r}", "edges") from None
        if not (0 <= u < node_count and 0 <= v < node_count) or u == v:
            raise MazeFormatError(f"bad edge ({u}, {v})", "edges")
        if v in nbrs[u]:
            raise MazeFormatError(f"duplicate edge ({u}, {v})", "edges")
        nbrs[u].add(v)
        nbrs[v].add(u)
    # connectivity; with V-1 edges this also rules out cycles
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in nbrs[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != node_count:
        raise MazeFormatError("edge set is disconnected (and therefore cyclic elsewhere)", "edges")
    coords_t = tuple((float(x), float(y)) for x, y in coords) if coords is not None else None
    adjacency = tuple(tuple(_canonical_order(nbrs[u], u, coords_t, order_rule)) for u in range(node_count))
    return MazeGraph(adjacency, start, goal, coords_t, order_rule, tuple(grid_shape) if grid_shape else None)


def validate_maze(maze: MazeGraph):
    """Re-check every MazeGraph invariant; raises MazeError on violation."""
    rebuilt = build_maze(
        maze.node_count,
        maze.edges(),
        maze.start,
        maze.goal,
        maze.coords,
        maze.order_rule,
        maze.grid_shape,
    )
    if rebuilt.adjacency != maze.adjacency:
        raise MazeError("adjacency order deviates from the canonical rule")


def generate_grid_maze(width: int, height: int, seed: int) -> MazeGraph:
    """Spanning tree of the width x height grid via randomized Prim.

    Maintains the frontier of walls between visited and unvisited cells and
    knocks one down uniformly at random.  Node id = row * width + col.
    Start and goal are then drawn uniformly over distinct cells.
    """
    if width < 1 or height < 1:
        raise MazeError("grid dimensions must be positive")
    n = width * height
    if n < 2:
        raise MazeError("grid must have at least 2 cells (start and goal are distinct)")
    rng = random.Random(seed)

    def cell_neighbors(c):
        r, col = divmod(c, width)
        if r > 0:
            yield c - width
        if col + 1 < width:
            yield c + 1
        if r + 1 < height:
            yield c + width
        if col > 0:
            yield c - 1

    first = rng.randrange(n)
    in_tree = [False] * n
    in_tree[first] = True
    walls = [(first, v) for v in cell_neighbors(first)]
    edges = []
    while walls:
        i = rng.randrange(len(walls))
        walls[i], walls[-1] = walls[-1], walls[i]
        u, v = walls.pop()
        if in_tree[v]:
            continue
        in_tree[v] = True
        edges.append((u, v))
        for w in cell_neighbors(v):
            if not in_tree[w]:
                walls.append((v, w))
    start = rng.randrange(n)
    goal = rng.randrange(n - 1)
    if goal >= start:
        goal += 1
    coords = [(c % width, c // width) for c in range(n)]
    return build_maze(n, edges, start, goal, coords, "compass", (width, height))


def generate_geometric_maze(node_count: int, seed: int, region=(100.0, 100.0)) -> MazeGraph:
    """Euclidean minimum spanning tree over random non-overlapping points.

    Points are rejection-sampled with a minimum pairwise separation of 5% of
    the region diagonal (at most 10,000 placement attempts).  Start is the
    node nearest the upper-left region corner, goal the one nearest the
    lower-right corner (y grows downward).
    """
    if node_count < 2:
        raise MazeError("geometric maze needs at least 2 nodes")
    w, h = float(region[0]), float(region[1])
    if w <= 0 or h <= 0:
        raise MazeError("region dimensions must be positive")
    rng = random.Random(seed)
    min_sep = 0.05 * math.hypot(w, h)
    pts = []
    attempts = 0
    while len(pts) < node_count:
        attempts += 1
        if attempts > 10_000:
            raise MazeError(
                f"could not place {node_count} nodes with separation {min_sep:.3g} "
                f"in a {w} x {h} region"
            )
        p = (rng.uniform(0.0, w), rng.uniform(0.0, h))
        if all(math.dist(p, q) >= min_sep for q in pts):
            pts.append(p)

    # Prim MST over the complete Euclidean graph; deterministic tie-break by id.
    in_tree = [False] * node_count
    best_d = [math.inf] * node_count
    best_from = [-1] * node_count
    in_tree[0] = True
    for v in range(1, node_count):
        best_d[v] = math.dist(pts[0], pts[v])
        best_from[v] = 0
    edges = []
    for _ in range(node_count - 1):
        u = min((v for v in range(node_count) if not in_tree[v]), key=lambda v: (best_d[v], v))
        in_tree[u] = True
        edges.append((best_from[u], u))
        for v in range(node_count):
            if not in_tree[v]:
                d = math.dist(pts[u], pts[v])
                if d < best_d[v]:
                    best_d[v] = d
                    best_from[v] = u
    start = min(range(node_count), key=lambda v: (math.dist(pts[v], (0.0, 0.0)), v))
    goal = min((v for v in range(node_count) if v != start), key=lambda v: (math.dist(pts[v], (w, h)), v))
    return build_maze(node_count, edges, start, goal, pts, "angle")


MAZE_FORMAT_VERSION = 1


def serialize_maze(maze: MazeGraph) -> str:
    """Maze file text (JSON document, stable key order)."""
    doc = {
        "version": MAZE_FORMAT_VERSION,
        "nodes": maze.node_count,
        "edges": [list(e) for e in maze.edges()],
        "start": maze.start,
        "goal": maze.goal,
    }
    if maze.coords is not None:
        doc["coords"] = [list(c) for c in maze.coords]
    if maze.order_rule != ("angle" if maze.coords is not None else "index"):
        doc["order"] = maze.order_rule
    if maze.grid_shape is not None:
        doc["grid"] = list(maze.grid_shape)
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def parse_maze(text: str) -> MazeGraph:
    """Parse and validate a maze file; raises MazeFormatError on the first violation."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MazeFormatError(f"not valid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise MazeFormatError("document must be a JSON object")
    for key in ("version", "nodes", "edges", "start", "goal"):
        if key not in doc:
            raise MazeFormatError("missing", key)
    if doc["version"] != MAZE_FORMAT_VERSION:
        raise MazeFormatError(f"unsupported version {doc['version']!r}", "version")
    if not isinstance(doc["nodes"], int) or doc["nodes"] < 2:
        raise MazeFormatError("must be an integer >= 2", "nodes")
    coords = doc.get("coords")
    order = doc.get("order")
    grid = doc.get("grid")
    if order is None:
        order = "angle" if coords is not None else "index"
    if grid is not None:
        if (not isinstance(grid, list)) or len(grid) != 2:
            raise MazeFormatError("must be [width, height]", "grid")
        grid = (int(grid[0]), int(grid[1]))
    return build_maze(doc["nodes"], doc["edges"], int(doc["start"]), int(doc["goal"]), coords, order, grid)


def render_ascii(maze: MazeGraph, marks: dict | None = None) -> str:
    """ASCII picture of a grid maze: walls '#', corridors ' ', plus S/G marks.

    ``marks`` optionally maps node id -> single display character drawn on the
    cell (used by the trace replayer); S/G are applied last unless overridden.
    """
    if maze.grid_shape is None:
        raise MazeError("ASCII rendering needs a grid maze")
    w, h = maze.grid_shape
    rows = [["#"] * (2 * w + 1) for _ in range(2 * h + 1)]
    for c in range(maze.node_count):
        cx, cy = int(maze.coords[c][0]), int(maze.coords[c][1])
        rows[2 * cy + 1][2 * cx + 1] = " "
    for u, v in maze.edges():
        ux, uy = int(maze.coords[u][0]), int(maze.coords[u][1])
        vx, vy = int(maze.coords[v][0]), int(maze.coords[v][1])
        rows[uy + vy + 1][ux + vx + 1] = " "
    cells = {maze.start: "S", maze.goal: "G"}
    if marks:
        cells.update(marks)
    for node, ch in cells.items():
        cx, cy = int(maze.coords[node][0]), int(maze.coords[node][1])
        rows[2 * cy + 1][2 * cx + 1] = str(ch)[0]
    return "\n".join("".join(r) for r in rows)
