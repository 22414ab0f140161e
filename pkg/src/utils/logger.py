"""
Logging configuration with structured JSON logging.
Console output goes to stderr so stdout stays reserved for result documents.
"""
import logging
import sys
from pathlib import Path
from datetime import datetime
from typing import Optional

from pythonjsonlogger import jsonlogger

from src.config import settings


def setup_logging(level: Optional[str] = None, log_dir: Optional[str] = None) -> Path:
    """
    Configure logging for the lab.

    Args:
        level: Override for settings.log_level
        log_dir: Override for settings.log_dir

    Returns:
        Path of the JSON log file
    """
    directory = Path(log_dir or settings.log_dir)
    directory.mkdir(parents=True, exist_ok=True)

    # Create log filename with date
    log_date = datetime.now().strftime("%Y%m%d")
    log_file = directory / f"{settings.log_file.replace('.log', '')}_{log_date}.log"

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, (level or settings.log_level).upper(), logging.INFO))

    # Remove existing handlers
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(root_logger.level)
    console_formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    console_handler.setFormatter(console_formatter)

    # File handler with JSON logging
    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(logging.DEBUG)
    json_formatter = jsonlogger.JsonFormatter(
        '%(asctime)s %(name)s %(levelname)s %(message)s %(pathname)s %(lineno)d'
    )
    file_handler.setFormatter(json_formatter)

    root_logger.addHandler(console_handler)
    root_logger.addHandler(file_handler)

    # Suppress noisy libraries
    logging.getLogger('joblib').setLevel(logging.WARNING)
    logging.getLogger('sqlalchemy.engine').setLevel(logging.WARNING)
    logging.getLogger('numexpr').setLevel(logging.WARNING)

    logging.debug(f"Log file: {log_file}")
    return log_file
