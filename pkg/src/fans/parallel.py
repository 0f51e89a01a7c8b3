"""Index-ordered task execution, serial or across worker processes.

Results always come back in submission order, so callers see identical
output no matter how many workers ran the tasks.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional

from .errors import ConfigError

WORKERS_ENV = "FANS_WORKERS"


def resolve_workers(workers: Optional[int]) -> int:
    """Explicit value, else the FANS_WORKERS variable, else 1."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        workers = int(env) if env else 1
    if workers < 1:
        raise ConfigError("worker count must be >= 1")
    return workers


def ordered_map(fn: Callable, items: Iterable, workers: Optional[int] = None) -> List:
    """Map ``fn`` over ``items``, preserving order; fans out for workers > 1."""
    items = list(items)
    workers = resolve_workers(workers)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
