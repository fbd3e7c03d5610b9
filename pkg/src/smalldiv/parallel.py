"""Deterministic process-pool map used by the harnesses."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SMALLDIV_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items, threads: int = 1) -> list:
    """map(fn, items) with results in input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))
