"""Centralized logging helpers based on loguru."""

from __future__ import annotations

import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from loguru import logger as loguru_logger

from sbpdiss.core.settings import LoggingConfigModel

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "{extra[run]: <8} | "
    "{extra[module]: <24} | "
    "<cyan>{message}</cyan>"
)
BANNER_WIDTH = 80

loguru_logger.configure(extra={"module": "-", "run": "-"})


@dataclass
class Logger:
    """Thin wrapper around loguru logger bound to module name and run context."""

    module: str
    context: dict[str, Any] = field(default_factory=dict)

    def _bind(self) -> Any:
        return loguru_logger.bind(module=self.module, **self.context)

    def __getattr__(self, item: str) -> Callable[..., Any]:
        bound = self._bind()
        attr = getattr(bound, item)
        if not callable(attr):
            raise AttributeError(item)
        return attr

    def bind(self, **extra: Any) -> Logger:
        return Logger(self.module, {**self.context, **extra})

    def banner(self, *lines: str) -> None:
        bound = self._bind()
        bound.info("=" * BANNER_WIDTH)
        for line in lines:
            bound.info(line)
        bound.info("=" * BANNER_WIDTH)

    @contextmanager
    def timed(self, label: str) -> Iterator[None]:
        """Log the wall time of the enclosed block at debug level."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self._bind().debug(f"{label} took {time.perf_counter() - start:.3f}s")


def configure_logging(config: LoggingConfigModel) -> None:
    """Configure global logging according to the provided config.

    Logs go to stderr; stdout is reserved for the machine-readable run summary.
    """
    loguru_logger.remove()
    loguru_logger.add(
        sys.stderr,
        level=config.level.upper(),
        format=LOG_FORMAT,
        backtrace=True,
        diagnose=True,
    )


def get_logger(name: str) -> Logger:
    """Return application logger bound to the provided module name."""
    return Logger(module=name)


__all__ = ["configure_logging", "get_logger", "Logger"]
