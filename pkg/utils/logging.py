"""Structured logging setup for the IRS-THz simulator."""

import logging
import sys
from contextvars import ContextVar
from typing import Optional

# Context variable for correlation ID (trial or sweep tag)
correlation_id_var: ContextVar[Optional[str]] = ContextVar('correlation_id', default=None)

_HANDLER_MARK = "_irssim_handler"


class CorrelationFilter(logging.Filter):
    """Add correlation ID to log records."""

    def filter(self, record):
        record.correlation_id = correlation_id_var.get() or "main"
        return True


class ColoredFormatter(logging.Formatter):
    """Colored console formatter."""

    COLORS = {
        'DEBUG': '\033[36m',     # Cyan
        'INFO': '\033[32m',      # Green
        'WARNING': '\033[33m',   # Yellow
        'ERROR': '\033[31m',     # Red
        'CRITICAL': '\033[35m',  # Magenta
    }
    RESET = '\033[0m'

    def format(self, record):
        levelname = record.levelname
        if levelname in self.COLORS:
            record.levelname = f"{self.COLORS[levelname]}{levelname}{self.RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = levelname


def setup_logging(level: str = "INFO", log_file: Optional[str] = None, color: bool = True):
    """Setup structured logging with correlation IDs.

    Calling it again replaces the handlers installed by a previous call, so
    the CLI and tests can both configure logging in one process.
    """
    console_formatter_cls = ColoredFormatter if color else logging.Formatter
    console_formatter = console_formatter_cls(
        fmt="%(asctime)s [%(correlation_id)s] %(levelname)s %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S"
    )

    root_logger = logging.getLogger()
    for handler in list(root_logger.handlers):
        if getattr(handler, _HANDLER_MARK, False):
            root_logger.removeHandler(handler)
            handler.close()

    # Console handler; stderr keeps stdout free for emitted tables
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(console_formatter)
    console_handler.addFilter(CorrelationFilter())
    setattr(console_handler, _HANDLER_MARK, True)
    root_logger.addHandler(console_handler)

    if log_file:
        file_formatter = logging.Formatter(
            fmt="%(asctime)s [%(correlation_id)s] %(levelname)s %(name)s:%(lineno)d: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(file_formatter)
        file_handler.addFilter(CorrelationFilter())
        setattr(file_handler, _HANDLER_MARK, True)
        root_logger.addHandler(file_handler)

    root_logger.setLevel(getattr(logging, level.upper()))


def set_correlation_id(correlation_id: str):
    """Set correlation ID for current context and return the reset token."""
    return correlation_id_var.set(correlation_id)


def reset_correlation_id(token) -> None:
    """Restore the correlation ID that was active before `set_correlation_id`."""
    correlation_id_var.reset(token)


def get_correlation_id() -> Optional[str]:
    """Get current correlation ID."""
    return correlation_id_var.get()
