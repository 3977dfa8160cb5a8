"""Counter-based deterministic random streams.

Every random draw in a trial is a pure function of (stream key, counter), so
state can be snapshotted, embedded in a message payload, and resumed anywhere
without replaying history.  The compiled kernel reimplements ``draw`` with the
same 64-bit arithmetic; the two must stay bit-identical.
"""

from __future__ import annotations

import hashlib

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One output of the splitmix64 mixer for a 64-bit input."""
    x = (x + _GOLDEN) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def stream_key(seed: int, *labels) -> int:
    """Derive an independent 64-bit stream key from a seed and labels.

    Uses blake2b over a stable textual encoding, so keys are reproducible
    across platforms and documented by construction.
    """
    text = ":".join([str(int(seed) & MASK64)] + [str(l) for l in labels])
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def draw(key: int, counter: int) -> int:
    """The counter-th 64-bit output of the stream identified by ``key``."""
    return splitmix64((key + _GOLDEN * counter) & MASK64)
