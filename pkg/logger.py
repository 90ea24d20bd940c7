"""
Logging module for the Beltrami verification toolkit.

Console output goes to stderr; stdout carries CSV only.
A timestamped file log is added only when a log directory or file is given.
"""

import logging
import os
import sys
from datetime import datetime

from config import DEFAULT_LOG_PREFIX, LOG_FILE_FORMAT, LOG_FORMAT, LOGGER_NAME


class CustomFormatter(logging.Formatter):
    """Formatter that colorizes records when stderr is a terminal."""

    COLORS = {
        "DEBUG": "\033[94m",
        "INFO": "\033[92m",
        "WARNING": "\033[93m",
        "ERROR": "\033[91m",
        "CRITICAL": "\033[91m\033[1m",
        "RESET": "\033[0m",
    }

    def format(self, record):
        message = super().format(record)
        if sys.stderr.isatty():
            color = self.COLORS.get(record.levelname, self.COLORS["RESET"])
            message = f"{color}{message}{self.COLORS['RESET']}"
        return message


def setup_logger(level="INFO", log_file=None, log_dir=None, log_prefix=DEFAULT_LOG_PREFIX,
                 include_timestamp=True, console_level=None):
    """Configure and return the package logger.

    Args:
        level (str): Logging level for the file handler and the logger itself
        log_file (str, optional): Explicit path of the log file
        log_dir (str, optional): Directory for a generated log file name
        log_prefix (str, optional): Prefix for generated log file names
        include_timestamp (bool, optional): Whether generated names carry a timestamp
        console_level (str, optional): Separate level for the console. If None, uses `level`

    Returns:
        logging.Logger: The configured "beltrami" logger
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)
    if console_level is None:
        console_numeric_level = numeric_level
    else:
        console_numeric_level = getattr(logging, console_level.upper(), numeric_level)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(min(numeric_level, console_numeric_level))
    logger.propagate = False

    if logger.handlers:
        for handler in list(logger.handlers):
            handler.close()
        logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_numeric_level)
    console_handler.setFormatter(CustomFormatter(LOG_FORMAT))
    logger.addHandler(console_handler)

    if log_file is None and log_dir is not None:
        os.makedirs(log_dir, exist_ok=True)
        if include_timestamp:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            log_file = os.path.join(log_dir, f"{log_prefix}_{timestamp}.log")
        else:
            log_file = os.path.join(log_dir, f"{log_prefix}.log")

    if log_file is not None:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(logging.Formatter(LOG_FILE_FORMAT))
        logger.addHandler(file_handler)
        logger.debug(f"Log file: {log_file}")

    logger.debug(f"Logging initialized at level {level} (file) / {console_level or level} (console)")

    def exception_handler(exc_type, exc_value, exc_traceback):
        """Log unhandled exceptions before the default hook prints them."""
        if issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_traceback)
            return
        logger.critical("Unhandled exception:", exc_info=(exc_type, exc_value, exc_traceback))
        sys.__excepthook__(exc_type, exc_value, exc_traceback)

    sys.excepthook = exception_handler

    return logger


def get_logger(module_name):
    """Return the child logger for a module, e.g. ``beltrami.bootstrap``."""
    return logging.getLogger(f"{LOGGER_NAME}.{module_name}")


def log_system_info(logger):
    """Log platform and numerical library versions.

    Args:
        logger: Logger instance
    """
    import platform

    import numpy
    import scipy

    logger.info("System Information:")
    logger.info(f"  Platform: {platform.platform()}")
    logger.info(f"  Python Version: {platform.python_version()}")
    logger.info(f"  NumPy: {numpy.__version__}, SciPy: {scipy.__version__}")

    try:
        import psutil

        mem = psutil.virtual_memory()
        logger.info(f"  RAM: Total={mem.total / (1024**3):.2f}GB, Available={mem.available / (1024**3):.2f}GB")
        logger.info(f"  CPU Cores: {psutil.cpu_count(logical=False)} Physical, {psutil.cpu_count()} Logical")
    except ImportError:
        logger.debug("psutil not available for extended system information")
