from __future__ import annotations

import logging
import sys
import traceback

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def level_for(verbosity: int, quiet: bool = False) -> int:
    if quiet:
        return logging.ERROR
    if verbosity >= 2:
        return logging.DEBUG
    if verbosity == 1:
        return logging.INFO
    return logging.WARNING


def configure_logging(verbosity: int = 0, quiet: bool = False) -> logging.Logger:
    """Send package logs to stderr; stdout stays reserved for reports."""
    logger = logging.getLogger("leapfrog_hamilton")
    for handler in list(logger.handlers):
        if getattr(handler, "_leapfrog_cli", False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._leapfrog_cli = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
    logger.setLevel(level_for(verbosity, quiet))
    logger.propagate = False
    return logger


def describe_exception(error: BaseException) -> tuple[str, str]:
    traceback_text = "".join(traceback.format_exception(type(error), error, error.__traceback__))
    return str(error) or error.__class__.__name__, traceback_text
