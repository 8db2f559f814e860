"""Deterministic parallel map.

Work items are evaluated possibly out of order across a thread pool, but
results are always assembled in input order, so reductions downstream are
bit-stable no matter how many workers run.  The pool width is capped by the
``SASAKI_THREADS`` environment variable (0 or 1 disables threading).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

_T = TypeVar("_T")
_R = TypeVar("_R")


def thread_budget() -> int:
    raw = os.environ.get("SASAKI_THREADS", "")
    try:
        cap = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        cap = 1
    return max(1, cap)


def ordered_map(fn: Callable[[_T], _R], items: Iterable[_T]) -> list[_R]:
    seq: Sequence[_T] = list(items)
    width = min(thread_budget(), len(seq)) if seq else 1
    if width <= 1:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=width) as pool:
        return list(pool.map(fn, seq))
