"""Deterministic thread-pool map controlled by ``DISPERSIVE_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "DISPERSIVE_THREADS"


def thread_count():
    """Worker count from the environment (default 1, invalid values ignored)."""
    try:
        return max(1, int(os.environ.get(ENV_THREADS, "1")))
    except ValueError:
        return 1


def parallel_map(fn, items, threads=None):
    """``[fn(x) for x in items]`` evaluated on a thread pool, order preserved."""
    items = list(items)
    threads = thread_count() if threads is None else max(1, int(threads))
    if threads == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
