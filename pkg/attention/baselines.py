"""
Comparison attention kernels: blocked local (halo) attention and global attention
Both use the same theta/phi/omega transforms and 1/sqrt(c) scaling as the
pixel adapter.
"""

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from data_models import FeatureMap, PamWeights
from errors import KernelError, ShapeMismatchError
from tensor_core import linear_array, map_batches, softmax_lastdim


def _transforms(x: np.ndarray, wts: PamWeights):
    return linear_array(x, wts.theta), linear_array(x, wts.phi), linear_array(x, wts.omega)


def _halo_item(x: np.ndarray, wts: PamWeights, block: int, halo: int) -> np.ndarray:
    b, c, h, w = x.shape
    ty, tx = h // block, w // block
    win = block + 2 * halo
    q, keys, values = _transforms(x, wts)

    def tiles(a: np.ndarray) -> np.ndarray:
        padded = np.pad(a, ((0, 0), (0, 0), (halo, halo), (halo, halo)), mode='constant')
        windows = sliding_window_view(padded, (win, win), axis=(2, 3))[:, :, ::block, ::block]
        # [b,c,ty,tx,win,win] -> [b,ty,tx,win*win,c]
        return windows.reshape(b, c, ty, tx, win * win).transpose(0, 2, 3, 4, 1)

    # [b,c,ty,block,tx,block] -> [b,ty,tx,block*block,c]
    queries = q.reshape(b, c, ty, block, tx, block).transpose(0, 2, 4, 3, 5, 1)
    queries = queries.reshape(b, ty, tx, block * block, c)
    key_tiles = tiles(keys)
    logits = np.matmul(queries, key_tiles.swapaxes(-1, -2)) / math.sqrt(c)
    att = softmax_lastdim(logits)
    out = np.matmul(att, tiles(values))
    out = out.reshape(b, ty, tx, block, block, c).transpose(0, 5, 1, 3, 2, 4)
    return out.reshape(b, c, h, w)


def halo_attention(f: FeatureMap, wts: PamWeights, block: int, halo: int, threads: int = 1) -> FeatureMap:
    """
    Blocked local attention
    Args:
        f: input map; h and w must be multiples of block
        wts: shared q/k/v transforms
        block: tile side; every query in a tile sees the same keys
        halo: border added around each tile; outside the image keys and values are zero
    """
    if wts.c != f.c:
        raise ShapeMismatchError(f"weights are for {wts.c} channels, input has {f.c}")
    if block < 1 or halo < 0:
        raise KernelError(f"block must be >= 1 and halo >= 0, got block={block}, halo={halo}")
    if f.h % block or f.w % block:
        raise ShapeMismatchError(f"{f.h}x{f.w} is not divisible into {block}x{block} tiles")
    wts = wts.astype(f.dtype)
    parts = map_batches(lambda i: _halo_item(f.data[i:i + 1], wts, block, halo), f.b, threads)
    return FeatureMap(np.concatenate(parts, axis=0), copy=False)


def _global_item(x: np.ndarray, wts: PamWeights) -> np.ndarray:
    b, c, h, w = x.shape
    n = h * w
    q, keys, values = (t.reshape(b, c, n).transpose(0, 2, 1) for t in _transforms(x, wts))
    att = softmax_lastdim(np.matmul(q, keys.swapaxes(-1, -2)) / math.sqrt(c))  # [b,n,n]
    out = np.matmul(att, values)
    return out.transpose(0, 2, 1).reshape(b, c, h, w)


def global_attention(f: FeatureMap, wts: PamWeights, threads: int = 1) -> FeatureMap:
    """Full scaled dot-product attention of every pixel over every pixel"""
    if wts.c != f.c:
        raise ShapeMismatchError(f"weights are for {wts.c} channels, input has {f.c}")
    wts = wts.astype(f.dtype)
    parts = map_batches(lambda i: _global_item(f.data[i:i + 1], wts), f.b, threads)
    return FeatureMap(np.concatenate(parts, axis=0), copy=False)
