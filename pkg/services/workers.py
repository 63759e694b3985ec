# services/workers.py
import contextvars
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from config import get_settings


def fan_out(fn: Callable, jobs: Sequence[tuple]) -> list:
    """Results of fn(*job) in job order; threads only when more than one worker is configured"""
    workers = get_settings().workers
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(contextvars.copy_context().run, fn, *job) for job in jobs]
        return [f.result() for f in futures]
