"""Logging and environment helpers.

Simulation parameters are passed as command line flags only so that every
run can be replayed from its arguments. The log level is the single value
that may come from the environment; it never changes results.
"""

from __future__ import annotations

import logging
import os

from .const import LOG_FORMAT, LOG_LEVEL_ENV

logger = logging.getLogger(__name__)

_LEVEL_NAMES = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


def get_env(name: str, default: str | None = None) -> str | None:
    """Return an environment variable, or ``default`` when unset or blank."""
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return value.strip()


def resolve_log_level(flag: str | None = None) -> int:
    """Resolve the log level from the flag, the environment, then WARNING.

    Unknown level names fall back to WARNING with a warning once logging
    is configured.
    """
    raw = flag or get_env(LOG_LEVEL_ENV, "WARNING") or "WARNING"
    name = raw.upper()
    if name not in _LEVEL_NAMES:
        logger.warning(
            "Invalid log level '%s'. Using default: WARNING", raw
        )
        return logging.WARNING
    return getattr(logging, name)


def configure_logging(flag: str | None = None) -> int:
    """Configure root logging on stderr and return the chosen level."""
    level = resolve_log_level(flag)
    if not logging.getLogger().handlers:
        logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger("timed_membrane_nets").setLevel(level)
    return level
