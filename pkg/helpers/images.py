"""
Images helper for Pixel Adapter Bench
Handles plain-text PGM (P2) and PPM (P3) reading and PGM writing
"""

from typing import List, Tuple

import numpy as np

from errors import ImageFormatError
from helpers.constants import PGM_MAX_VALUE

PGM_MAGIC = 'P2'
PPM_MAGIC = 'P3'


def _tokens(text: str) -> List[str]:
    """Whitespace separated tokens with '#' comments removed"""
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split('#', 1)[0].split())
    return tokens


def parse_pnm(text: str) -> Tuple[str, np.ndarray, int]:
    """
    Parse a plain-text PGM or PPM image
    Returns:
        (magic, pixels, max value); pixels are [h, w] for P2 and [h, w, 3] for P3
    """
    tokens = _tokens(text)
    if not tokens:
        raise ImageFormatError("empty image file")
    magic = tokens[0]
    if magic not in (PGM_MAGIC, PPM_MAGIC):
        raise ImageFormatError(f"unsupported image format '{magic}', expected P2 or P3")
    if len(tokens) < 4:
        raise ImageFormatError("truncated header, expected width, height and max value")
    try:
        width, height, max_value = (int(t) for t in tokens[1:4])
    except ValueError:
        raise ImageFormatError(f"malformed header: {' '.join(tokens[1:4])}")
    if width < 1 or height < 1:
        raise ImageFormatError(f"image dimensions must be positive, got {width}x{height}")
    if not 1 <= max_value <= PGM_MAX_VALUE:
        raise ImageFormatError(f"max value must be in 1..{PGM_MAX_VALUE}, got {max_value}")

    samples = 3 if magic == PPM_MAGIC else 1
    expected = width * height * samples
    body = tokens[4:]
    if len(body) != expected:
        raise ImageFormatError(f"expected {expected} pixel values, found {len(body)}")
    try:
        values = np.array([int(t) for t in body], dtype=np.int64)
    except ValueError:
        raise ImageFormatError("pixel values must be integers")
    if values.min() < 0 or values.max() > max_value:
        raise ImageFormatError(f"pixel values must be in 0..{max_value}")

    shape = (height, width, 3) if samples == 3 else (height, width)
    return magic, values.reshape(shape).astype(np.float64), max_value


def read_pgm(path: str) -> np.ndarray:
    """Read a P2 file as a float [h, w] array of raw pixel values"""
    with open(path, 'r', encoding='ascii', errors='replace') as f:
        magic, pixels, _ = parse_pnm(f.read())
    if magic != PGM_MAGIC:
        raise ImageFormatError(f"{path} is {magic}, expected a plain PGM (P2)")
    return pixels


def format_pgm(pixels: np.ndarray, comment: str = "") -> str:
    """Plain PGM text for an integer [h, w] array in 0..255, one image row per line"""
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise ImageFormatError(f"PGM output must be 2D, got shape {pixels.shape}")
    if pixels.size and (pixels.min() < 0 or pixels.max() > PGM_MAX_VALUE):
        raise ImageFormatError(f"PGM values must be in 0..{PGM_MAX_VALUE}")
    height, width = pixels.shape
    lines = [PGM_MAGIC]
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"{width} {height}")
    lines.append(str(PGM_MAX_VALUE))
    lines.extend(' '.join(str(int(v)) for v in row) for row in pixels)
    return '\n'.join(lines) + '\n'


def write_pgm(path: str, pixels: np.ndarray, comment: str = ""):
    with open(path, 'w', encoding='ascii', newline='\n') as f:
        f.write(format_pgm(pixels, comment))


def rescale_to_bytes(plane: np.ndarray) -> np.ndarray:
    """Affinely map a plane onto 0..255 (rounded); a constant plane maps to 0"""
    plane = np.asarray(plane, dtype=np.float64)
    low, high = float(plane.min()), float(plane.max())
    if high <= low:
        return np.zeros(plane.shape, dtype=np.int64)
    scaled = (plane - low) * (PGM_MAX_VALUE / (high - low))
    return np.clip(np.rint(scaled), 0, PGM_MAX_VALUE).astype(np.int64)
