"""Deterministic parallel map over blocks of observation points.

Points are cut into blocks whose size depends only on the problem size, never
on the thread count, and every block is evaluated by the same code path.
Results are therefore bit-identical for any number of threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

THREADS_ENV = "RIS_SCATTER_THREADS"

# Upper bound on (points x tiles x stacked sources) per block.
BLOCK_ELEMENTS = 1 << 19


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def block_size(n_tiles: int, n_sources: int = 1) -> int:
    return int(max(1, min(1024, BLOCK_ELEMENTS // max(1, n_tiles * n_sources))))


def map_points(fn: Callable[[np.ndarray], np.ndarray], points: np.ndarray, block: int,
               threads: int | None = None, axis: int = 0) -> np.ndarray:
    """Apply ``fn`` to consecutive point blocks and concatenate along ``axis``.

    ``fn`` receives an (n, 3) block and must return an array whose ``axis``
    dimension has length n.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    threads = default_threads() if threads is None else max(1, int(threads))
    starts = list(range(0, len(pts), block))
    if not starts:
        return fn(pts)
    chunks = [pts[s:s + block] for s in starts]
    if threads == 1 or len(chunks) == 1:
        parts = [fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(fn, chunks))
    return np.concatenate(parts, axis=axis)
