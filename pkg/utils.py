"""
Utility functions for Pixel Adapter Bench
"""

import os
import sys
from typing import List, Optional, Sequence

from errors import KernelError
from helpers.logger import Logger, get_logger


def setup_logging(log_level: str = "INFO", log_file: Optional[str] = None) -> Logger:
    """Configure the shared logger; the log file's directory is created on demand"""
    if log_file:
        ensure_parent_directory(log_file)
    logger = get_logger()
    logger.configure(log_level, log_file)
    return logger


def get_application_path() -> str:
    """Directory of the executable when frozen, else of this module"""
    if getattr(sys, 'frozen', False):
        return os.path.dirname(sys.executable)
    return os.path.dirname(os.path.abspath(__file__))


def get_config_path() -> str:
    """Default config.ini next to main.py"""
    return os.path.join(get_application_path(), 'config.ini')


def ensure_parent_directory(path: str):
    """Create the directory that will hold `path` if it is missing"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def format_file_size(size_bytes: int) -> str:
    """Format file size in human readable format"""
    if size_bytes == 0:
        return "0 B"

    size_names = ["B", "KB", "MB", "GB", "TB"]
    size = float(size_bytes)
    i = 0
    while size >= 1024 and i < len(size_names) - 1:
        size /= 1024.0
        i += 1

    return f"{size:.1f} {size_names[i]}"


def format_duration_ns(ns: int) -> str:
    """Format a nanosecond duration with a readable unit"""
    for unit, scale in (("s", 1e9), ("ms", 1e6), ("us", 1e3)):
        if ns >= scale:
            return f"{ns / scale:.2f} {unit}"
    return f"{ns} ns"


def parse_int_list(text: str, name: str = "value") -> List[int]:
    """Parse a comma separated list of positive integers, e.g. '16,32,64'"""
    items = [part.strip() for part in str(text).split(',') if part.strip()]
    if not items:
        raise KernelError(f"{name} list is empty")
    try:
        values = [int(item) for item in items]
    except ValueError:
        raise KernelError(f"{name} must be comma separated integers, got '{text}'")
    if any(v < 1 for v in values):
        raise KernelError(f"{name} values must be >= 1, got '{text}'")
    return values


def parse_name_list(text: str, allowed: Sequence[str], name: str = "value") -> List[str]:
    """Parse a comma separated list of names, each one of `allowed`"""
    items = [part.strip() for part in str(text).split(',') if part.strip()]
    if not items:
        raise KernelError(f"{name} list is empty")
    unknown = [item for item in items if item not in allowed]
    if unknown:
        raise KernelError(f"unknown {name} {', '.join(unknown)}; expected one of {', '.join(allowed)}")
    return items
