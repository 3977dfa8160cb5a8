"""Offline trace replay: reconstruct per-step frames and render them.

A trace is the JSONL event stream written by the engine's reference path (one
JSON object per line: tick, phase, agent, position, leader, target, event).
Frames are world snapshots at the end of each step; frame 0 is the initial
deployment.  Rendering is deliberately plain: ASCII grids for terminals and
minimal standalone SVG documents.
"""

from __future__ import annotations

import json
import warnings


def load_trace(path) -> list:
    with open(path) as fh:
        return parse_trace_lines(fh)


def parse_trace_lines(lines) -> list:
    """Parse JSONL trace entries; a malformed tail yields the valid prefix
    plus a warning instead of an error (partial traces replay fine)."""
    out = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            out.append(json.loads(line))
        except json.JSONDecodeError:
            warnings.warn(f"trace truncated or corrupt at line {lineno}; replaying prefix")
            break
    return out


def replay_frames(trace) -> list:
    """List of (positions, leaders) dicts, one per frame (step 0 included)."""
    positions = {}
    leaders = {}
    for e in trace:
        if e["phase"] == "init":
            positions[e["agent"]] = e["position"]
            leaders[e["agent"]] = e["leader"]
    if not positions:
        warnings.warn("empty trace: nothing to replay")
        return []
    frames = [(dict(positions), dict(leaders))]
    tick = 0
    for e in trace:
        if e["phase"] == "init":
            continue
        if e["tick"] != tick:
            frames.append((dict(positions), dict(leaders)))
            tick = e["tick"]
        if e["agent"] is None:
            continue  # trial-level event (fault marker)
        if e["phase"] == "move" and e["event"] in ("move", "arrive"):
            positions[e["agent"]] = e["position"]
        if e["phase"] in ("decide", "update"):
            leaders[e["agent"]] = e["leader"]
    frames.append((dict(positions), dict(leaders)))
    # the first tick flush above duplicates frame 0 when step 1 had events
    if len(frames) >= 2 and frames[0] == frames[1]:
        frames.pop(1)
    return frames


def _occupancy_marks(positions, leaders):
    per_node = {}
    for a, v in positions.items():
        per_node.setdefault(v, []).append(a)
    marks = {}
    for v, agents in per_node.items():
        if any(leaders.get(a) is None for a in agents):
            marks[v] = "H"
        elif len(agents) > 9:
            marks[v] = "+"
        else:
            marks[v] = str(len(agents))
    return marks


def ascii_frames(maze, trace) -> list:
    """One ASCII grid per frame; the head renders as H, other occupied cells
    as their agent count."""
    from .maze import render_ascii

    out = []
    for k, (positions, leaders) in enumerate(replay_frames(trace)):
        if maze.grid_shape is not None:
            art = render_ascii(maze, _occupancy_marks(positions, leaders))
        else:
            # no layout: one line per occupied node instead of a picture
            marks = _occupancy_marks(positions, leaders)
            art = "\n".join(f"node {v}: {marks[v]}" for v in sorted(marks))
        out.append(f"step {k}\n{art}")
    return out


def svg_frames(maze, trace, scale: float = 24.0) -> list:
    """One standalone SVG document per frame: maze edges, start/goal, agent
    dots (head highlighted), and leader-pointer arrows."""
    if maze.coords is None:
        raise ValueError("SVG rendering needs node coordinates")
    xs = [c[0] for c in maze.coords]
    ys = [c[1] for c in maze.coords]
    pad = scale

    def pt(v):
        x, y = maze.coords[v]
        return (pad + (x - min(xs)) * scale, pad + (y - min(ys)) * scale)

    width = pad * 2 + (max(xs) - min(xs)) * scale
    height = pad * 2 + (max(ys) - min(ys)) * scale
    base = []
    for u, v in maze.edges():
        (x1, y1), (x2, y2) = pt(u), pt(v)
        base.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            'stroke="#999" stroke-width="4"/>'
        )
    for v, label, color in ((maze.start, "S", "#2a2"), (maze.goal, "G", "#a22")):
        x, y = pt(v)
        base.append(f'<text x="{x:.1f}" y="{y - 6:.1f}" font-size="10" fill="{color}">{label}</text>')

    frames = []
    for k, (positions, leaders) in enumerate(replay_frames(trace)):
        body = list(base)
        for a in sorted(positions):
            if leaders.get(a) is None:
                continue
            lead = leaders[a]
            if lead not in positions:
                continue
            (x1, y1), (x2, y2) = pt(positions[a]), pt(positions[lead])
            body.append(
                f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                'stroke="#48c" stroke-width="1" stroke-dasharray="3 2"/>'
            )
        for a in sorted(positions):
            x, y = pt(positions[a])
            head = leaders.get(a) is None
            body.append(
                f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{5 if head else 3}" '
                f'fill="{"#d22" if head else "#36c"}"/>'
            )
        body.append(f'<text x="4" y="12" font-size="11">step {k}</text>')
        frames.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
            f'height="{height:.0f}">\n' + "\n".join(body) + "\n</svg>\n"
        )
    return frames
