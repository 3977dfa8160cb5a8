"""Deterministic lockstep simulator for distributed multi-agent traversal of
tree-shaped mazes, with single-agent solvers, baseline strategies, and a batch
experiment harness."""

__version__ = "0.1.0"
