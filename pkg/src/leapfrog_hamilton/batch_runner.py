from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def run_batch(task: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Apply ``task`` to every item; results come back in input order.

    With more than one worker the items are shipped to a process pool, so
    ``task`` must be a module-level function and items must pickle.
    """
    if workers <= 1 or len(items) <= 1:
        return [task(item) for item in items]
    pool_size = min(workers, len(items))
    logger.debug("running %d task(s) on %d worker process(es)", len(items), pool_size)
    with ProcessPoolExecutor(max_workers=pool_size) as executor:
        return list(executor.map(task, items))
