"""
Logging configuration for the imaging toolkit

Logging Categories:
- [CONF ]: Scene and configuration loading
- [GEOM ]: Curve evaluation and discretization
- [SYNTH]: MSR matrix synthesis
- [SVD  ]: Subspace decomposition
- [IMAGE]: Imaging maps and predictors
- [SCENE]: Pipeline orchestration
- [EXPRT]: Map export
- [ENV  ]: Environment variable handling
"""

import os
import logging
from typing import Optional

LOG_FORMAT = '%(asctime)s | %(levelname)-5s | %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def _log_file() -> str:
    # An empty LOG_FILE disables the file handler
    return os.getenv('LOG_FILE', 'logs/music.log')


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Get a configured logger instance

    Args:
        name: Logger name (typically __name__)
        level: Optional log level override

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    if not logger.handlers:
        log_level = level or os.getenv('LOG_LEVEL', 'INFO')
        logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))

        formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        log_file = _log_file()
        if log_file:
            log_dir = os.path.dirname(log_file)
            if log_dir:
                os.makedirs(log_dir, exist_ok=True)
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        # Prevent propagation to root logger
        logger.propagate = False

    return logger


def _src_loggers():
    for name, candidate in list(logging.Logger.manager.loggerDict.items()):
        if name.startswith('src') and isinstance(candidate, logging.Logger):
            yield candidate


def set_level(level: str):
    """
    Change the level of every logger created through get_logger

    Args:
        level: Level name such as "DEBUG" or "WARNING"
    """
    numeric = getattr(logging, level.upper(), logging.INFO)
    for candidate in _src_loggers():
        candidate.setLevel(numeric)


def apply_environment():
    """
    Re-read LOG_LEVEL and LOG_FILE for loggers created before the
    environment was loaded (module loggers exist from import time)
    """
    set_level(os.getenv('LOG_LEVEL', 'INFO'))

    log_file = _log_file()
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)

    for candidate in _src_loggers():
        for handler in [h for h in candidate.handlers if isinstance(h, logging.FileHandler)]:
            candidate.removeHandler(handler)
            handler.close()
        if log_file:
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            candidate.addHandler(file_handler)
