"""
Error types for Pixel Adapter Bench
All of them are ValueError subclasses so callers can keep catching ValueError
"""

from typing import Optional


class KernelError(ValueError):
    """Base class for invalid input to any kernel, loss or command"""


class ShapeMismatchError(KernelError):
    """Raised when tensor dimensions do not agree"""


class WindowConfigError(KernelError):
    """Raised for an invalid window size or a window larger than the padded image"""


class SizeCapError(KernelError):
    """Raised when a benchmark size exceeds a configured cap"""


class ImageFormatError(KernelError):
    """Raised for unreadable or unsupported image files"""


class CsvFormatError(KernelError):
    """Raised for malformed benchmark CSV input"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
