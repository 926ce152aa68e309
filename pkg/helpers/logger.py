"""
Logger helper for Pixel Adapter Bench
Diagnostics go to stderr (and optionally a file); reports and CSV never pass
through here.
"""

import logging
import sys
from typing import Optional

LOGGER_NAME = 'pixel_adapter'
RECORD_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
FRAME_WIDTH = 20


def _level(name: str) -> int:
    return getattr(logging, str(name).upper(), logging.INFO)


class Logger:
    """Process-wide wrapper around the 'pixel_adapter' logger"""

    def __init__(self):
        self._logger = logging.getLogger(LOGGER_NAME)

    def configure(self, level: str = "INFO", log_file: Optional[str] = None):
        """
        Route records to stderr, plus log_file when given
        Args:
            level: DEBUG, INFO, WARNING, ERROR or CRITICAL; unknown names mean INFO
            log_file: appended to, never truncated
        """
        handlers = [logging.StreamHandler(sys.stderr)]
        if log_file:
            handlers.append(logging.FileHandler(log_file, mode='a'))
        logging.basicConfig(level=_level(level), format=RECORD_FORMAT, handlers=handlers, force=True)
        self._logger.setLevel(_level(level))

    def log_info(self, message: str):
        self._logger.info(message)

    def log_warning(self, message: str):
        self._logger.warning(message)

    def log_debug(self, message: str):
        self._logger.debug(message)

    def log_error(self, message: str):
        """Error framed so it stands out between progress lines"""
        title = ' Error '
        self._logger.error('')
        self._logger.error(title + '-' * (FRAME_WIDTH - len(title)))
        for line in str(message).splitlines() or ['']:
            self._logger.error(f'    {line}')
        self._logger.error('-' * FRAME_WIDTH)


_logger_instance: Optional[Logger] = None


def get_logger() -> Logger:
    global _logger_instance
    if _logger_instance is None:
        _logger_instance = Logger()
    return _logger_instance


def log(message: str):
    get_logger().log_info(message)


def log_error(message: str):
    get_logger().log_error(message)
