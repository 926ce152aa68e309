"""
Histogram of oriented gradients
Pipeline: grayscale, optional gamma, central-difference gradients,
per-cell orientation histograms over unsigned directions [0, pi),
per-cell L2 standardization, concatenation in row-major cell order.
Trailing pixels that do not fill a whole cell are dropped.
"""

from typing import Optional

import numpy as np

from data_models import FeatureMap, GradientField, HogDescriptor, HogParams
from errors import ShapeMismatchError
from helpers.logger import get_logger


def to_grayscale(img: FeatureMap) -> FeatureMap:
    """Per-pixel channel mean, [b, 1, h, w]"""
    if img.c == 1:
        return FeatureMap(img.data)
    return FeatureMap(img.data.mean(axis=1, keepdims=True), copy=False)


def gamma_correct(plane: np.ndarray, gamma) -> np.ndarray:
    """I^gamma on values clamped to >= 0; gamma None disables the correction"""
    if gamma is None:
        return plane
    return np.power(np.maximum(plane, 0.0), gamma)


def gradients_array(plane: np.ndarray) -> GradientField:
    """Central differences with replicated borders on a raw [h, w] plane"""
    h, w = plane.shape
    if h < 2 or w < 2:
        raise ShapeMismatchError(f"gradients need h, w >= 2, got {h}x{w}")
    padded = np.pad(plane.astype(np.float64, copy=False), 1, mode='edge')
    gx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    gy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    magnitude = np.sqrt(gx * gx + gy * gy)
    direction = np.mod(np.arctan2(gy, gx), np.pi)
    # mod can round up to exactly pi
    direction[direction >= np.pi] = 0.0
    direction[magnitude == 0] = 0.0
    return GradientField(gx, gy, magnitude, direction)


def image_gradients(img: FeatureMap) -> GradientField:
    """Gradient field of a single-channel, single-image map"""
    if img.b != 1 or img.c != 1:
        raise ShapeMismatchError(f"gradients need a [1, 1, h, w] image, got {list(img.shape)}")
    return gradients_array(img.data[0, 0])


def orientation_histograms(gf: GradientField, params: HogParams) -> np.ndarray:
    """
    Raw per-cell histograms
    Args:
        gf: gradient field of the image
        params: cell size, bin count and binning mode
    Returns:
        array [cells_y, cells_x, n_bins]; zero-magnitude pixels add nothing
    """
    cs, n_bins = params.cell_size, params.n_bins
    h, w = gf.shape
    cells_y, cells_x = h // cs, w // cs
    if cells_y == 0 or cells_x == 0:
        return np.zeros((cells_y, cells_x, n_bins))
    magnitude = gf.magnitude[:cells_y * cs, :cells_x * cs]
    direction = gf.direction[:cells_y * cs, :cells_x * cs]

    bins = np.minimum((direction * (n_bins / np.pi)).astype(np.int64), n_bins - 1)
    ys, xs = np.indices(magnitude.shape)
    cell_index = (ys // cs) * cells_x + (xs // cs)
    counted = magnitude > 0
    slots = (cell_index * n_bins + bins)[counted]
    weights = magnitude[counted] if params.binning == 'magnitude' else None
    hist = np.bincount(slots, weights=weights, minlength=cells_y * cells_x * n_bins)
    return hist.astype(np.float64).reshape(cells_y, cells_x, n_bins)


def normalize_descriptor(hists: np.ndarray, params: HogParams) -> HogDescriptor:
    """Every cell block divided by sqrt(||block||^2 + epsilon^2); zero blocks stay zero"""
    cells_y, cells_x, n_bins = hists.shape
    blocks = hists.reshape(-1, n_bins)
    norms = np.sqrt(np.sum(blocks * blocks, axis=1, keepdims=True) + params.epsilon ** 2)
    safe = np.where(norms > 0, norms, 1.0)
    normalized = np.where(norms > 0, blocks / safe, 0.0)
    return HogDescriptor(normalized, cells_y, cells_x, n_bins)


def hog(img: FeatureMap, params: Optional[HogParams] = None) -> HogDescriptor:
    """
    HOG descriptor of one image
    Args:
        img: [1, c, h, w]; channels are averaged first
        params: defaults to HogParams()
    """
    params = params or HogParams()
    if img.b != 1:
        raise ShapeMismatchError(f"hog works on one image at a time, got batch {img.b}")
    plane = gamma_correct(to_grayscale(img).data[0, 0].astype(np.float64, copy=False), params.gamma)
    hists = orientation_histograms(gradients_array(plane), params)
    get_logger().log_debug(f"hog {img.h}x{img.w} -> {hists.shape[0]}x{hists.shape[1]} cells")
    return normalize_descriptor(hists, params)
