"""
Worker pool for independent trials
Fans picklable work items out to processes and gathers results in index order
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from ..core.errors import ConfigError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

JOBS_ENV = "PWTEST_JOBS"


def resolve_jobs(jobs: Optional[int] = None) -> int:
    """
    Worker count from the argument, then PWTEST_JOBS, then 1

    Raises:
        ConfigError: If the resolved value is not a positive integer
    """
    if jobs is None:
        jobs = os.getenv(JOBS_ENV, "1")
    try:
        jobs = int(jobs)
    except (TypeError, ValueError):
        raise ConfigError(f"jobs must be a positive integer, got {jobs!r}")
    if jobs < 1:
        raise ConfigError(f"jobs must be a positive integer, got {jobs}")
    return jobs


def run_indexed(fn: Callable[[T], R], items: Sequence[T], jobs: Optional[int] = 1,
                on_done: Optional[Callable[[int], None]] = None) -> List[R]:
    """
    Apply fn to every item; results[i] = fn(items[i]) for any worker count

    Args:
        fn: Module-level (picklable) function
        items: Picklable work items
        jobs: Worker processes; 1 runs in-process
        on_done: Called with the number of finished items after each one

    Returns:
        Results in item order
    """
    jobs = resolve_jobs(jobs)
    items = list(items)
    if jobs == 1 or len(items) <= 1:
        results = []
        for item in items:
            results.append(fn(item))
            if on_done:
                on_done(len(results))
        return results

    workers = min(jobs, len(items))
    logger.debug(f"Running {len(items)} work items on {workers} processes")
    results = []
    with ProcessPoolExecutor(max_workers=workers) as executor:
        for result in executor.map(fn, items, chunksize=max(1, len(items) // (4 * workers))):
            results.append(result)
            if on_done:
                on_done(len(results))
    return results
