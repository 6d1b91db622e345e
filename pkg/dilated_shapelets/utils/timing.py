"""
Wall-clock timing of pipeline stages.
"""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

logger = logging.getLogger(__name__)


@dataclass
class Timer:
    """Elapsed seconds of a finished stage."""

    label: str
    seconds: float = 0.0


@contextmanager
def timed(label: str, level: int = logging.INFO) -> Iterator[Timer]:
    """Measure and log the duration of the enclosed block."""
    timer = Timer(label)
    start_time = time.perf_counter()
    try:
        yield timer
    finally:
        timer.seconds = time.perf_counter() - start_time
        logger.log(level, f"Stage: {label} - Duration: {timer.seconds:.3f}s")
