"""Deterministic fork-based parallel map.

Results always come back in input order, so output is independent of the
worker count.  Worker state too large to pickle per-task is installed once
per worker through the initializer.
"""

from __future__ import annotations

import multiprocessing
from typing import Callable, Iterable, Sequence


def pmap(
    fn: Callable,
    items: Sequence,
    jobs: int = 1,
    initializer: Callable | None = None,
    initargs: tuple = (),
) -> list:
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        if initializer is not None:
            initializer(*initargs)
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (jobs * 4))
    with multiprocessing.Pool(jobs, initializer, initargs) as pool:
        return pool.map(fn, items, chunksize=chunk)


def default_jobs() -> int:
    return multiprocessing.cpu_count()
