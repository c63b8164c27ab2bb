"""
Structured logging setup
"""
import logging
import sys
from typing import Optional

from pythonjsonlogger import jsonlogger

from .config import Config

_HANDLER_NAME = "kappanet-stderr"


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> logging.Logger:
    """
    Install a single stderr handler on the package logger

    Args:
        level: Log level name, defaults to Config.LOG_LEVEL
        fmt: 'json' or 'text', defaults to Config.LOG_FORMAT

    Returns:
        The configured package logger
    """
    level = (level or Config.LOG_LEVEL).upper()
    fmt = (fmt or Config.LOG_FORMAT).lower()

    logger = logging.getLogger("src")
    logger.setLevel(level)

    for handler in list(logger.handlers):
        if handler.get_name() == _HANDLER_NAME:
            logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    if fmt == "json":
        handler.setFormatter(jsonlogger.JsonFormatter(
            "%(asctime)s %(levelname)s %(name)s %(message)s",
            rename_fields={"levelname": "level", "asctime": "time"},
        ))
    else:
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))

    logger.addHandler(handler)
    return logger
