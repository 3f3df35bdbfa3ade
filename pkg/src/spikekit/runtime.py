"""Runtime knobs: the SPIKEKIT_THREADS parallelism cap."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import DomainError

_T = TypeVar("_T")
_R = TypeVar("_R")

ENV_THREADS = "SPIKEKIT_THREADS"


def thread_cap() -> int:
    """Worker cap from SPIKEKIT_THREADS; 0 or unset means auto (cpu count)."""
    raw = os.environ.get(ENV_THREADS, "0")
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{ENV_THREADS} must be a non-negative integer, got {raw!r}") from None
    if value < 0:
        raise DomainError(f"{ENV_THREADS} must be a non-negative integer, got {raw!r}")
    if value == 0:
        return os.cpu_count() or 1
    return value


def parallel_map(fn: Callable[[_T], _R], items: Iterable[_T]) -> list[_R]:
    """Order-preserving map over items, threaded up to thread_cap() workers.

    Results do not depend on the schedule; with a cap of 1 this is a plain map.
    """
    seq: Sequence[_T] = list(items)
    cap = min(thread_cap(), max(1, len(seq)))
    if cap <= 1 or len(seq) <= 1:
        return [fn(item) for item in seq]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, seq))
