"""
Tensor core for Pixel Adapter Bench
Dense primitives consumed by every kernel: unfold/fold, pixel shuffle,
pointwise linear transforms, softmax and batch-parallel execution
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import erf

from data_models import FeatureMap, LinearWeights, UnfoldedMap, WindowConfig
from errors import ShapeMismatchError

T = TypeVar('T')


def unfold(f: FeatureMap, cfg: WindowConfig) -> UnfoldedMap:
    """
    Zero-padded sliding-window extraction (im2col)
    Args:
        f: input map [b, c, h, w]
        cfg: window size k and padding k // 2
    Returns:
        columns [b, c*k*k, h*w]; column i holds pixel i's window in
        (channel, window-row, window-col) order
    """
    cfg.check_fits(f.h, f.w)
    return UnfoldedMap(unfold_array(f.data, cfg), cfg.k)


def unfold_array(x: np.ndarray, cfg: WindowConfig) -> np.ndarray:
    b, c, h, w = x.shape
    k, p = cfg.k, cfg.p
    padded = np.pad(x, ((0, 0), (0, 0), (p, p), (p, p)), mode='constant')
    windows = sliding_window_view(padded, (k, k), axis=(2, 3))  # [b, c, h, w, k, k]
    return windows.transpose(0, 1, 4, 5, 2, 3).reshape(b, c * k * k, h * w)


def fold(cols: UnfoldedMap, h: int, w: int) -> FeatureMap:
    """Adjoint of unfold: scatter-add every window slot back onto its source pixel"""
    return FeatureMap(fold_array(cols.data, WindowConfig(cols.k), h, w), copy=False)


def fold_array(cols: np.ndarray, cfg: WindowConfig, h: int, w: int) -> np.ndarray:
    b, ckk, n = cols.shape
    k, p = cfg.k, cfg.p
    if n != h * w or ckk % (k * k) != 0:
        raise ShapeMismatchError(f"columns {cols.shape} do not fold onto {h}x{w} with k={k}")
    c = ckk // (k * k)
    blocks = cols.reshape(b, c, k, k, h, w)
    padded = np.zeros((b, c, h + 2 * p, w + 2 * p), dtype=cols.dtype)
    for dy in range(k):
        for dx in range(k):
            padded[:, :, dy:dy + h, dx:dx + w] += blocks[:, :, dy, dx]
    return padded[:, :, p:p + h, p:p + w].copy()


def pixel_shuffle(f: FeatureMap, r: int) -> FeatureMap:
    """Sub-pixel rearrangement [b, c*r*r, h, w] -> [b, c, h*r, w*r]"""
    if r < 1 or f.c % (r * r) != 0:
        raise ShapeMismatchError(f"channel count {f.c} is not divisible by r^2 = {r * r}")
    b, c, h, w = f.shape
    out_c = c // (r * r)
    x = f.data.reshape(b, out_c, r, r, h, w).transpose(0, 1, 4, 2, 5, 3)
    return FeatureMap(x.reshape(b, out_c, h * r, w * r), copy=False)


def pixel_unshuffle(f: FeatureMap, r: int) -> FeatureMap:
    """Inverse of pixel_shuffle"""
    if r < 1 or f.h % r != 0 or f.w % r != 0:
        raise ShapeMismatchError(f"spatial dims {f.h}x{f.w} are not divisible by r = {r}")
    b, c, h, w = f.shape
    x = f.data.reshape(b, c, h // r, r, w // r, r).transpose(0, 1, 3, 5, 2, 4)
    return FeatureMap(x.reshape(b, c * r * r, h // r, w // r), copy=False)


def linear_array(x: np.ndarray, wts: LinearWeights) -> np.ndarray:
    """Per-pixel W @ x + bias on a raw [b, c_in, h, w] array"""
    b, c, h, w = x.shape
    if c != wts.c_in:
        raise ShapeMismatchError(f"input has {c} channels, transform expects {wts.c_in}")
    weights = wts.w.astype(x.dtype, copy=False)
    bias = wts.bias.astype(x.dtype, copy=False)
    y = np.matmul(weights, x.reshape(b, c, h * w)) + bias[None, :, None]
    return y.reshape(b, wts.c_out, h, w)


def pointwise_linear(f: FeatureMap, wts: LinearWeights) -> FeatureMap:
    """1x1 convolution: every pixel transformed independently"""
    return FeatureMap(linear_array(f.data, wts), copy=False)


def softmax_lastdim(t: np.ndarray) -> np.ndarray:
    """Max-subtracted softmax along the last axis; NaN inputs propagate NaN"""
    shifted = t - np.max(t, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def gelu(x: np.ndarray) -> np.ndarray:
    """Exact GELU, x * Phi(x)"""
    return 0.5 * x * (1.0 + erf(x / math.sqrt(2.0)))


def map_batches(fn: Callable[[int], T], batch: int, threads: int = 1) -> List[T]:
    """
    Run fn(i) for every batch index, in order
    Args:
        fn: per-item computation; must not depend on the other items
        batch: number of items
        threads: worker count; the split is per item either way, so results
            are bit-identical for every thread count
    """
    if threads <= 1 or batch <= 1:
        return [fn(i) for i in range(batch)]
    with ThreadPoolExecutor(max_workers=min(threads, batch)) as executor:
        return list(executor.map(fn, range(batch)))
