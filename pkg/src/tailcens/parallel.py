"""Ordered map over replicate indices with optional thread workers.

Results come back in replicate order whatever the worker count, so callers
that key their random streams by replicate index get identical output for
any scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

__all__ = ["replicate_map"]


def replicate_map(fn, count: int, workers: int = 1) -> list:
    """Apply ``fn`` to 0..count-1, returning results in index order."""
    if workers <= 1:
        return [fn(r) for r in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))
