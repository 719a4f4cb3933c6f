"""Deterministic fan-out over independent work items."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def workers_from_env(default: int = 1) -> int:
    """Worker cap from ``QES_THREADS``; bad or missing values fall back to ``default``."""
    try:
        return max(1, int(os.environ.get("QES_THREADS", default)))
    except ValueError:
        return default


def parallel_map(fn, items, workers: int | None = None) -> list:
    """``map`` that may run in a process pool; results keep input order."""
    items = list(items)
    workers = workers_from_env() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as ex:
        return list(ex.map(fn, items))
