"""
Ordered worker pool on asyncio threads
"""

import asyncio
import logging
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


async def run_ordered(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """Run fn over items on at most `workers` threads; results keep item order"""
    semaphore = asyncio.Semaphore(max(1, workers))

    async def _run(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(fn, item)

    return list(await asyncio.gather(*(_run(item) for item in items)))


def map_ordered(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> List[R]:
    """Blocking wrapper around run_ordered; runs inline for a single worker"""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug("dispatching %d tasks to %d workers", len(items), workers)
    return asyncio.run(run_ordered(fn, items, workers))
