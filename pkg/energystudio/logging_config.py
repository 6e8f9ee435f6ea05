"""
Centralized logging configuration for EnergyStudio.

Every module obtains its logger through `get_logger`, so the whole package is
controlled by the same environment variables. Modules attach numerical context
through `extra={...}`; `ExtraFormatter` appends those fields to the message as
`key=value` pairs so radii, verdicts and residuals show up in the log lines.
"""

import logging
import os
from typing import Any

_PREFIX = "energystudio"
_DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Attributes every LogRecord carries; anything else came in through `extra`.
_RECORD_FIELDS = set(vars(logging.LogRecord("", logging.INFO, "", 0, "", None, None))) | {
    "message",
    "asctime",
    "taskName",
}


def _render(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_render(item) for item in value) + "]"
    return str(value)


class ExtraFormatter(logging.Formatter):
    """Formatter that appends the `extra` fields of a record as sorted `key=value` pairs."""

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        fields = {key: value for key, value in vars(record).items() if key not in _RECORD_FIELDS}
        if not fields:
            return line
        return line + " | " + " ".join(f"{key}={_render(fields[key])}" for key in sorted(fields))


def _level(name: str | None) -> int:
    return getattr(logging, (name or "INFO").upper(), logging.INFO)


def get_logger(name: str) -> logging.Logger:
    """
    Get a configured logger for an EnergyStudio component.

    Args:
        name (str): Logger name relative to the package (e.g. 'geometry.psi').

    Returns:
        logging.Logger: Configured logger instance

    Environment Variables:
        ENERGYSTUDIO_LOG_LEVEL: Set logging level (DEBUG, INFO, WARNING, ERROR)
        ENERGYSTUDIO_LOG_FORMAT: Set custom log format (optional)
        ENERGYSTUDIO_LOG_FILE: Set log file path (optional)

    Examples:
        >>> logger = get_logger("geometry.psi")
        >>> logger.info("Solved comparison ODE", extra={"theta_max": 10.0})
        # ... - energystudio.geometry.psi - INFO - Solved comparison ODE | theta_max=10.0
    """
    logger = logging.getLogger(f"{_PREFIX}.{name}")
    if logger.handlers:
        return logger

    formatter = ExtraFormatter(os.environ.get("ENERGYSTUDIO_LOG_FORMAT", _DEFAULT_FORMAT))
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    log_file = os.environ.get("ENERGYSTUDIO_LOG_FILE")
    failure: OSError | None = None
    if log_file:
        try:
            handlers.append(logging.FileHandler(log_file))
        except OSError as e:
            failure = e
    for handler in handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    logger.setLevel(_level(os.environ.get("ENERGYSTUDIO_LOG_LEVEL")))
    logger.propagate = False
    if failure is not None:
        logger.warning("Failed to create log file", extra={"log_file": log_file, "error": str(failure)})
    return logger


def configure_root_logger(level: str | None = None) -> None:
    """Set the level of the `energystudio` logger, from `level` or ENERGYSTUDIO_LOG_LEVEL."""
    logging.getLogger(_PREFIX).setLevel(_level(level or os.environ.get("ENERGYSTUDIO_LOG_LEVEL")))


def set_log_level(level: str) -> None:
    """
    Set the level of every EnergyStudio logger created so far.

    The CLI's `--log-level` flag ends up here.
    """
    level_obj = _level(level)
    for logger_name in list(logging.Logger.manager.loggerDict):
        if logger_name == _PREFIX or logger_name.startswith(f"{_PREFIX}."):
            logging.getLogger(logger_name).setLevel(level_obj)
