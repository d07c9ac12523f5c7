"""
Bounded parallel map over thread workers.

Numeric kernels release the GIL inside numpy, so independent rows, trials
and users are fanned out with asyncio.to_thread under a semaphore. Results
are gathered in input order, which keeps every merge deterministic.
"""

import asyncio
import os
from typing import Awaitable, Callable, Iterable, List, Optional, TypeVar

from src.utils.logger import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV = "GRIDTRACE_WORKERS"


def resolve_workers(workers: Optional[int] = None) -> int:
    """
    Resolve the effective worker count.

    Args:
        workers: Explicit count, or None for GRIDTRACE_WORKERS / cpu count

    Returns:
        Worker count >= 1
    """
    if workers is None:
        env_value = os.getenv(WORKERS_ENV)
        workers = int(env_value) if env_value else (os.cpu_count() or 1)
    return max(1, int(workers))


async def gather_bounded(
    func: Callable[[T], R], items: List[T], workers: int
) -> List[R]:
    """
    Run func over items on worker threads, at most `workers` at a time.

    Args:
        func: Synchronous function applied to each item
        items: Inputs, in the order results are returned
        workers: Concurrency cap

    Returns:
        Results in the same order as items
    """
    semaphore = asyncio.Semaphore(workers)

    async def run_one(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(func, item)

    tasks: List[Awaitable[R]] = [run_one(item) for item in items]
    return list(await asyncio.gather(*tasks))


def run_bounded(
    func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None
) -> List[R]:
    """
    Synchronous entry point for gather_bounded.

    Runs inline when only one worker is available or there is at most one
    item, so small workloads avoid the event loop entirely.

    Example:
        >>> run_bounded(lambda x: x * x, [1, 2, 3], workers=2)
        [1, 4, 9]
    """
    item_list = list(items)
    effective = resolve_workers(workers)

    if effective <= 1 or len(item_list) <= 1:
        return [func(item) for item in item_list]

    logger.debug("bounded_map_started", items=len(item_list), workers=effective)
    return asyncio.run(gather_bounded(func, item_list, effective))
