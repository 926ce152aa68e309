"""
Straight-line reference implementations
Plain loops over pixels and cells with no shared code path, used to
cross-check the vectorized library.
"""

import math
from typing import List

import numpy as np

from data_models import HogParams


def hog_straight_line(plane: np.ndarray, params: HogParams) -> List[float]:
    """HOG descriptor of a 2D grayscale plane, computed pixel by pixel"""
    h, w = plane.shape
    image = [[float(plane[y][x]) for x in range(w)] for y in range(h)]
    if params.gamma is not None:
        image = [[max(v, 0.0) ** params.gamma for v in row] for row in image]

    def at(y: int, x: int) -> float:
        return image[min(max(y, 0), h - 1)][min(max(x, 0), w - 1)]

    cs, n_bins = params.cell_size, params.n_bins
    cells_y, cells_x = h // cs, w // cs
    descriptor = []
    for cy in range(cells_y):
        for cx in range(cells_x):
            hist = [0.0] * n_bins
            for y in range(cy * cs, (cy + 1) * cs):
                for x in range(cx * cs, (cx + 1) * cs):
                    gx = (at(y, x + 1) - at(y, x - 1)) / 2.0
                    gy = (at(y + 1, x) - at(y - 1, x)) / 2.0
                    mag = math.sqrt(gx * gx + gy * gy)
                    if mag == 0:
                        continue
                    angle = math.atan2(gy, gx)
                    if angle < 0:
                        angle += math.pi
                    if angle >= math.pi:
                        angle = 0.0
                    b = min(int(angle * n_bins / math.pi), n_bins - 1)
                    hist[b] += mag if params.binning == 'magnitude' else 1.0
            norm = math.sqrt(sum(v * v for v in hist) + params.epsilon ** 2)
            descriptor.extend(v / norm if norm > 0 else 0.0 for v in hist)
    return descriptor


def checkerboard(size: int = 16, square: int = 4) -> np.ndarray:
    """0/1 checkerboard plane with `square` pixel squares"""
    ys, xs = np.indices((size, size))
    return (((ys // square) + (xs // square)) % 2).astype(np.float64)
