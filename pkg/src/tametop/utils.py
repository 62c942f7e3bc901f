"""Utility Module.

This module provides the shared logger of the tametop package and the helper that
resolves the random seed used by every randomized check.
"""

import logging
import os
import sys
from typing import Optional

from colorama import Fore, Style, init

# colorama translates the escape codes on Windows consoles
init(autoreset=True)

SEED_ENV_VAR: str = "TAMETOP_SEED"
DEFAULT_SEED: int = 1


class CustomFormatter(logging.Formatter):
    """Formats records as ``LVL tametop.<module>: message`` with an abbreviated, optionally
    colored level. File logs additionally carry a timestamp and the emitting function."""

    LEVELS: dict[int, tuple[str, str]] = {
        logging.DEBUG: ("DBG", Fore.WHITE),
        logging.INFO: ("INF", Fore.CYAN),
        logging.WARNING: ("WAR", Fore.YELLOW),
        logging.ERROR: ("ERR", Fore.RED),
        logging.CRITICAL: ("CRT", Fore.LIGHTRED_EX),
    }

    def __init__(self, use_colors: bool = True, detailed: bool = False):
        """Initialize the formatter.

        Args:
            use_colors (bool): Color the level and message (console only).
            detailed (bool): Prefix a timestamp and suffix ``module:function``.
        """
        pattern = "{level} {name}.{module}: {message}"
        if detailed:
            pattern = "[{asctime}] " + pattern + " || {funcName}"
        super().__init__(pattern, style="{", datefmt="%Y-%m-%d %H:%M:%S")
        self.use_colors = use_colors

    def format(self, record: logging.LogRecord) -> str:
        abbr, color = self.LEVELS.get(record.levelno, (record.levelname[:3], ""))
        # a copy, so that other handlers still see the plain record
        shown = logging.makeLogRecord(record.__dict__)
        shown.level = abbr
        if self.use_colors:
            shown.level = f"{color}{abbr}{Style.RESET_ALL}"
            shown.msg = f"{color}{record.getMessage()}{Style.RESET_ALL}"
            shown.args = None
        return super().format(shown)


class LoggerManager:
    """Manages the logger instance with a console handler and an optional log file."""

    def __init__(self, log_file: Optional[str] = None):
        """Initialize the LoggerManager.

        Args:
            log_file (Optional[str]): Log file path. No file handler is attached if None,
                so that command output stays free of side effects.
        """
        self.logger = logging.getLogger("tametop")
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False

        self.console_handler = self._create_console_handler()
        self.file_handler: Optional[logging.Handler] = None
        self.logger.addHandler(self.console_handler)

        if log_file:
            self.update_log_file(log_file)

    @staticmethod
    def _create_console_handler() -> logging.Handler:
        """Creates a stderr handler with colored output."""
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(logging.WARNING)
        console_handler.setFormatter(CustomFormatter(use_colors=True))
        return console_handler

    @staticmethod
    def _create_file_handler(log_file: str) -> logging.Handler:
        """Creates a file handler without colored output."""
        file_handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(CustomFormatter(use_colors=False, detailed=True))
        return file_handler

    def update_log_file(self, new_log_file: str) -> None:
        """Attach (or replace) the file handler.

        Args:
            new_log_file (str): New log file path to use.
        """
        if self.file_handler is not None:
            self.logger.removeHandler(self.file_handler)
            self.file_handler.close()

        self.file_handler = self._create_file_handler(new_log_file)
        self.logger.addHandler(self.file_handler)
        self.logger.debug(f"Log file updated to: {new_log_file}")

    def set_console_level(self, level: int) -> None:
        """Change the verbosity of the console handler.

        Args:
            level (int): A `logging` level constant.
        """
        self.console_handler.setLevel(level)


# one manager per process; every module logs through it
_LOGGER_MANAGER = LoggerManager()


def get_logger() -> logging.Logger:
    """Returns the shared logger instance."""
    return _LOGGER_MANAGER.logger


def update_log_file(new_log_file: str) -> None:
    """Update the log file path for the shared logger."""
    _LOGGER_MANAGER.update_log_file(new_log_file)


def set_verbosity(verbosity: int) -> None:
    """Map a `-v` count to the console log level.

    Args:
        verbosity (int): 0 = warnings only, 1 = info, 2 or more = debug.
    """
    levels = {0: logging.WARNING, 1: logging.INFO}
    _LOGGER_MANAGER.set_console_level(levels.get(verbosity, logging.DEBUG))


def resolve_seed(explicit: Optional[int] = None, configured: Optional[int] = None) -> int:
    """Pick the seed for randomized checks.

    Precedence: explicit flag, then the `TAMETOP_SEED` environment variable, then the
    configured value, then `DEFAULT_SEED`.

    Args:
        explicit (Optional[int]): Seed given on the command line.
        configured (Optional[int]): Seed read from the YAML configuration.

    Returns:
        int: The seed to use.

    Raises:
        ValueError: If `TAMETOP_SEED` is set but is not an integer.
    """
    if explicit is not None:
        return explicit
    from_env = os.environ.get(SEED_ENV_VAR)
    if from_env is not None and from_env.strip():
        try:
            return int(from_env)
        except ValueError as exc:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {from_env!r}") from exc
    if configured is not None:
        return configured
    return DEFAULT_SEED
