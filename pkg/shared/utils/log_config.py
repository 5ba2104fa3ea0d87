"""
Loguru sink setup for command-line entry points
"""
import sys
from typing import Optional

from loguru import logger

from config.settings import settings


def configure_logging(level: Optional[str] = None) -> None:
    """Replace the default loguru sink with one stderr sink at `level`"""
    logger.remove()
    logger.add(
        sys.stderr,
        level=(level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
    )
