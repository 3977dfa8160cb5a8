import itertools
import json
import math
import random
from collections import deque

import pytest

from mamt import maze
from conftest import make_path, make_star4, prufer_tree, random_tree_maze


def bfs_distances(adj, source):
    dist = {source: 0}
    q = deque([source])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


# --- generation ---------------------------------------------------------


def test_grid_maze_basics():
    m = maze.generate_grid_maze(5, 5, seed=3)
    assert m.node_count == 25 and m.edge_count == 24
    assert m.start != m.goal
    maze.validate_maze(m)


def test_grid_maze_validator_many_seeds():
    cases = 0
    for w, h in ((1, 2), (2, 2), (3, 5), (5, 3), (4, 4), (6, 2)):
        for seed in range(170):
            m = maze.generate_grid_maze(w, h, seed)
            maze.validate_maze(m)
            cases += 1
    assert cases >= 1000


def test_grid_maze_degree_and_unit_steps():
    m = maze.generate_grid_maze(7, 6, seed=11)
    for u in range(m.node_count):
        assert len(m.neighbors(u)) <= 4
        for v in m.neighbors(u):
            dx = m.coords[v][0] - m.coords[u][0]
            dy = m.coords[v][1] - m.coords[u][1]
            assert abs(dx) + abs(dy) == 1


def test_grid_compass_neighbor_order():
    m = maze.generate_grid_maze(6, 6, seed=5)
    rank = {(0, -1): 0, (1, 0): 1, (0, 1): 2, (-1, 0): 3}  # N E S W
    for u in range(m.node_count):
        deltas = [
            (m.coords[v][0] - m.coords[u][0], m.coords[v][1] - m.coords[u][1])
            for v in m.neighbors(u)
        ]
        ranks = [rank[d] for d in deltas]
        assert ranks == sorted(ranks)


def test_grid_two_cells():
    m = maze.generate_grid_maze(1, 2, seed=0)
    assert m.node_count == 2 and m.edges() == [(0, 1)]
    assert {m.start, m.goal} == {0, 1}


def test_grid_determinism_and_rejections():
    a = maze.generate_grid_maze(20, 20, seed=7)
    b = maze.generate_grid_maze(20, 20, seed=7)
    assert a == b
    with pytest.raises(maze.MazeError):
        maze.generate_grid_maze(1, 1, seed=0)
    with pytest.raises(maze.MazeError):
        maze.generate_grid_maze(0, 5, seed=0)


def test_geometric_maze_basics():
    m = maze.generate_geometric_maze(12, seed=3)
    assert m.node_count == 12 and m.edge_count == 11
    maze.validate_maze(m)
    assert m == maze.generate_geometric_maze(12, seed=3)
    # minimum pairwise separation: 5% of the region diagonal
    min_sep = 0.05 * math.hypot(100, 100)
    for a, b in itertools.combinations(range(12), 2):
        assert math.dist(m.coords[a], m.coords[b]) >= min_sep


def test_geometric_corner_start_goal():
    m = maze.generate_geometric_maze(30, seed=9)
    d_start = [math.dist(c, (0, 0)) for c in m.coords]
    d_goal = [math.dist(c, (100, 100)) for c in m.coords]
    assert d_start[m.start] == min(d_start)
    assert d_goal[m.goal] == min(d for i, d in enumerate(d_goal) if i != m.start)


def test_geometric_mst_brute_force_oracle():
    # every labeled spanning tree (via Prufer enumeration) weighs at least
    # as much as the generated tree
    for seed in (0, 1, 2):
        n = 6
        m = maze.generate_geometric_maze(n, seed=seed)

        def weight(edges):
            return sum(math.dist(m.coords[u], m.coords[v]) for u, v in edges)

        ours = weight(m.edges())
        best = min(
            weight(prufer_tree(list(seq), n))
            for seq in itertools.product(range(n), repeat=n - 2)
        )
        assert ours <= best + 1e-9


def test_geometric_overcrowded_region_rejected():
    with pytest.raises(maze.MazeError):
        maze.generate_geometric_maze(500, seed=0, region=(10, 10))


# --- path queries -------------------------------------------------------


def test_tree_path_fixture_cases():
    p = make_path(3)
    assert p.tree_path(0, 3) == [0, 1, 2, 3]
    assert p.tree_path(2, 2) == [2]
    s = make_star4()
    assert s.tree_path(1, 3) == [1, 0, 2, 3]


def test_tree_path_distance_matches_bfs_oracle():
    rng = random.Random(5)
    m = random_tree_maze(rng, 30)
    for a in range(30):
        dist = bfs_distances({u: m.neighbors(u) for u in range(30)}, a)
        for b in range(30):
            path = m.tree_path(a, b)
            assert path[0] == a and path[-1] == b
            assert all(m.has_edge(u, v) for u, v in zip(path, path[1:]))
            assert len(path) - 1 == dist[b]


def test_tree_path_concatenation_through_midpoint():
    rng = random.Random(8)
    m = random_tree_maze(rng, 20)
    for a in range(0, 20, 3):
        for c in range(1, 20, 4):
            full = m.tree_path(a, c)
            for b in full:
                left = m.tree_path(a, b)
                right = m.tree_path(b, c)
                assert left + right[1:] == full


def test_next_hop_towards():
    m = make_star4()
    hop = m.next_hop_towards(3)
    assert hop == [2, 0, 3, 3]


# --- serialization ------------------------------------------------------


def test_round_trip_all_flavors():
    for m in (
        maze.generate_grid_maze(5, 4, seed=2),
        maze.generate_geometric_maze(15, seed=4),
        make_star4(),
    ):
        again = maze.parse_maze(maze.serialize_maze(m))
        assert again == m


def test_parse_rejects_bad_documents(star4):
    good = json.loads(maze.serialize_maze(star4))

    def reject(**changes):
        doc = dict(good, **changes)
        with pytest.raises(maze.MazeFormatError):
            maze.parse_maze(json.dumps(doc))

    reject(edges=good["edges"] + [[1, 3]])  # cycle
    reject(edges=good["edges"][:-1])  # disconnected
    reject(goal=good["start"])
    reject(start=99)
    reject(version=2)
    reject(nodes=1)
    with pytest.raises(maze.MazeFormatError):
        maze.parse_maze("{not json")
    with pytest.raises(maze.MazeFormatError):
        maze.parse_maze(json.dumps({k: v for k, v in good.items() if k != "goal"}))


def test_build_maze_rejects_duplicate_edge():
    with pytest.raises(maze.MazeFormatError):
        maze.build_maze(3, [(0, 1), (1, 0)], 0, 2)


# --- rendering ----------------------------------------------------------


def test_render_ascii_shape_and_marks():
    m = maze.generate_grid_maze(5, 3, seed=1)
    art = maze.render_ascii(m)
    lines = art.split("\n")
    assert len(lines) == 7 and all(len(l) == 11 for l in lines)
    assert art.count("S") == 1 and art.count("G") == 1
    marked = maze.render_ascii(m, {m.start: "H"})
    assert "S" not in marked and "H" in marked


def test_render_ascii_needs_grid(star4):
    with pytest.raises(maze.MazeError):
        maze.render_ascii(star4)
