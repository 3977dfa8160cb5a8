"""Compiled-kernel selection.

The hot per-step loop of the mamt strategy is implemented twice: in Cython
(``mamt._core``) for batch sweeps and in pure Python (the reference loop in
``mamt.engine``).  This module picks the compiled kernel at import time and
falls back silently; set ``MAMT_PURE=1`` to force the pure path, e.g. for the
kernel benchmark.
"""

from __future__ import annotations

import os

kernel = None
if os.environ.get("MAMT_PURE", "") != "1":
    try:
        from . import _core as kernel  # type: ignore[no-redef]
    except ImportError:
        kernel = None
