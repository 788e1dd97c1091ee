# weakrank/core/logging.py
import logging
from typing import Optional

from weakrank.core.config import settings


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
        force=True,
    )
