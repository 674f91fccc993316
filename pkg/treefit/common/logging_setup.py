import logging
import sys
import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from logging.handlers import RotatingFileHandler

from treefit.config import TestSettings, TreefitSettings
from treefit.constants import ExitCodes

logger = logging.getLogger(__name__)


def setup_logging(settings: TreefitSettings | TestSettings) -> None:
    """
    Set up logging configuration for a CLI invocation.

    Args:
        settings: Active settings (log level and optional log file).

    """
    log_formatter = logging.Formatter(
        "%(asctime)s %(levelname)s [%(name)s] %(message)s"
    )
    log_level = settings.LOG_LEVEL.upper()

    # Console handler (stdoutはレポート出力専用なのでstderrへ)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(log_formatter)
    console_handler.setLevel(log_level)

    # Clear existing handlers, then add new handlers
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()
    root_logger.addHandler(console_handler)

    # File handler with rotation
    log_path = settings.log_path
    if log_path is not None:
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_path, maxBytes=10 * 1024 * 1024, backupCount=5, encoding="utf-8"
        )
        file_handler.setFormatter(log_formatter)
        file_handler.setLevel(log_level)
        root_logger.addHandler(file_handler)


@dataclass
class CommandStatus:
    """Mutable outcome of a timed command; the error handler fills it in."""

    name: str
    exit_code: int = ExitCodes.OK


@contextmanager
def log_command(name: str) -> Iterator[CommandStatus]:
    """
    Time a CLI command and log its outcome.

    Args:
        name: Command name used in the log line.

    Yields:
        CommandStatus whose `exit_code` decides the log level.

    """
    status = CommandStatus(name)
    start_time = time.perf_counter()
    try:
        yield status
    finally:
        duration = time.perf_counter() - start_time
        ok = status.exit_code == ExitCodes.OK
        log_message = (
            f"command={status.name} status={'ok' if ok else 'error'} "
            f"exit_code={status.exit_code} duration={round(duration, 4)}s"
        )

        if status.exit_code == ExitCodes.INPUT_ERROR:
            logger.warning(log_message)
        elif not ok:
            logger.error(log_message)
        else:
            logger.info(log_message)
