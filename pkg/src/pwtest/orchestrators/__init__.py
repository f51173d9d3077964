"""Orchestration modules for pwtest"""

from pwtest.orchestrators.parallel import resolve_jobs, run_indexed

__all__ = [
    "resolve_jobs",
    "run_indexed",
]
