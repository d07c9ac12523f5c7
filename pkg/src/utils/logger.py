"""
Structured logging configuration using structlog.

Events go to stderr as JSON lines (console rendering when
ENVIRONMENT=development). Artifacts never carry log output, so reruns
stay byte-identical.
"""
import logging
import os
import sys
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, TextIO

import structlog

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def setup_logging(level: str = "INFO", stream: TextIO | None = None) -> None:
    """
    Configure structlog and the standard library root logger.

    Args:
        level: One of LEVELS, case-insensitive; "WARN" is accepted. Unknown
            names fall back to INFO with a warning event.
        stream: Output stream (default: sys.stderr)
    """
    name = level.strip().upper()
    name = "WARNING" if name == "WARN" else name
    log_level = getattr(logging, name) if name in LEVELS else logging.INFO
    stream = stream or sys.stderr

    logging.basicConfig(format="%(message)s", stream=stream, level=log_level)

    processors: list = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.StackInfoRenderer(),
        structlog.dev.set_exc_info,
        structlog.processors.TimeStamper(fmt="iso", utc=True),
    ]
    if os.getenv("ENVIRONMENT", "production") == "development":
        processors.append(structlog.dev.ConsoleRenderer())
    else:
        processors.append(structlog.processors.JSONRenderer())

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=stream),
        cache_logger_on_first_use=False,
    )

    if name not in LEVELS:
        get_logger(__name__).warning("unknown_log_level", level=level, using="INFO")


def get_logger(name: str = __name__) -> structlog.BoundLogger:
    """
    Get a structured logger instance.

    Example:
        >>> logger = get_logger(__name__)
        >>> logger.info("match_city_started", cities=10, cluster="40x40")
    """
    return structlog.get_logger(name)


def log_stage_execution(
    stage: str,
    duration_ms: float,
    error: str | None = None,
    **extra: Any,
) -> None:
    """
    Log one pipeline stage: ``stage_execution_success`` or
    ``stage_execution_failed`` with the rounded duration.

    Example:
        >>> log_stage_execution("sweep_row", duration_ms=812.4, point={"epsilon": 1.0})
    """
    log_data: Dict[str, Any] = {
        "stage": stage,
        "duration_ms": round(duration_ms, 2),
        "error": error,
        **extra,
    }
    logger = get_logger("stage_execution")
    if error:
        logger.error("stage_execution_failed", **log_data)
    else:
        logger.info("stage_execution_success", **log_data)


@contextmanager
def timed_stage(stage: str, **extra: Any) -> Iterator[None]:
    """
    Time the enclosed block and log it with log_stage_execution.

    Exceptions are logged with their type and re-raised.

    Example:
        >>> with timed_stage("reid_time", out="runs/time"):
        ...     run()
    """
    started = time.perf_counter()
    try:
        yield
    except Exception as e:
        log_stage_execution(
            stage,
            (time.perf_counter() - started) * 1000,
            error=str(e),
            error_type=type(e).__name__,
            **extra,
        )
        raise
    log_stage_execution(stage, (time.perf_counter() - started) * 1000, **extra)
