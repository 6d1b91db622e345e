"""
Thread-count resolution for numba kernels and worker pools.
"""

import os
from contextlib import contextmanager
from typing import Iterator, Optional

import numba

from ..config import settings


def resolve_threads(threads: Optional[int] = None) -> int:
    """Explicit value, then settings, then available cores."""
    if threads is None:
        threads = settings.runtime.threads
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


@contextmanager
def thread_limit(threads: Optional[int] = None) -> Iterator[int]:
    """Cap numba's parallel regions to ``threads`` for the enclosed block."""
    wanted = min(resolve_threads(threads), numba.config.NUMBA_NUM_THREADS)
    previous = numba.get_num_threads()
    numba.set_num_threads(wanted)
    try:
        yield wanted
    finally:
        numba.set_num_threads(previous)
