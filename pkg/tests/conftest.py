import random
import sys

import pytest

from mamt import maze


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def make_star4():
    """4-node star-with-tail: 0 (start) branches to 1 and 2; 2 leads to 3 (goal).

    Index order puts node 1 before node 2 in the start's neighbor list.
    """
    return maze.build_maze(4, [(0, 1), (0, 2), (2, 3)], start=0, goal=3)


def make_path(length):
    """Path graph 0 - 1 - ... - length; start 0, goal at distance ``length``."""
    return maze.build_maze(length + 1, [(i, i + 1) for i in range(length)], 0, length)


def prufer_tree(seq, node_count):
    """Labeled tree from a Prufer sequence (independent of the maze module)."""
    degree = [1] * node_count
    for v in seq:
        degree[v] += 1
    edges = []
    import heapq

    leaves = [v for v in range(node_count) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u, w = sorted(leaves)[:2]
    edges.append((u, w))
    return edges


def random_tree_maze(rng: random.Random, node_count: int):
    seq = [rng.randrange(node_count) for _ in range(node_count - 2)]
    edges = prufer_tree(seq, node_count)
    start = rng.randrange(node_count)
    goal = rng.randrange(node_count - 1)
    if goal >= start:
        goal += 1
    return maze.build_maze(node_count, edges, start, goal)


@pytest.fixture
def star4():
    return make_star4()


@pytest.fixture
def path4():
    return make_path(3)
