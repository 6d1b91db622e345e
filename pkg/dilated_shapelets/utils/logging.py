"""
Logging configuration for the dilated shapelet toolkit.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from ..config import settings


def setup_logging(
    log_level: Optional[str] = None, log_file: Optional[str] = None
) -> None:
    """Setup logging configuration."""
    if log_level is None:
        log_level = settings.monitoring.log_level
    if log_file is None:
        log_file = settings.monitoring.log_file

    # stdout carries command results
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )

    # Set specific logger levels
    logging.getLogger("numba").setLevel(logging.WARNING)
