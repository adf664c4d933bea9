import logging
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "vcgkit"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _console_handler(level: int) -> RichHandler:
    # stderr only: stdout carries outcome documents and check summaries.
    handler = RichHandler(console=Console(stderr=True), rich_tracebacks=True, markup=False, show_path=False)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    return handler


def _file_handler(log_file: Path, level: int) -> logging.FileHandler:
    log_file = Path(log_file)
    log_file.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(log_file, encoding="utf-8")
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(FILE_FORMAT))
    return handler


def setup_logger(name: str = LOGGER_NAME, log_file: Optional[Path] = None, level: int = logging.INFO) -> logging.Logger:
    """
    (Re)configure the package logger: a Rich console handler on stderr plus an
    optional file handler. Child loggers from `get_logger` inherit both.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    logger.addHandler(_console_handler(level))
    if log_file:
        logger.addHandler(_file_handler(log_file, level))
    return logger


def get_logger(area: str) -> logging.Logger:
    """A child of the package logger, e.g. `vcgkit.soundness`."""
    return logging.getLogger(f"{LOGGER_NAME}.{area}")


# Quiet by default; the cli raises the level with --verbose.
logger = setup_logger(level=logging.WARNING)
