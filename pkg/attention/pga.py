"""
Pixel graph attention over an explicit graph
The image is converted into a graph with one node per pixel; attention is
computed from a dense n x n score matrix masked by the adjacency matrix and reduced
node by node. This is the memory-heavy formulation the sliding-window
kernel replaces, kept as the correctness oracle and benchmark baseline.
"""

import math

import numpy as np

from data_models import FeatureMap, PamWeights, PgaGraph, WindowConfig
from errors import KernelError, ShapeMismatchError
from helpers.constants import PAD
from helpers.logger import get_logger
from tensor_core import linear_array, softmax_lastdim


def build_pixel_graph(h: int, w: int, cfg: WindowConfig) -> PgaGraph:
    """
    Node i is pixel (i // w, i % w); its neighbor list is its k x k window in
    row-major order with out-of-image slots marked PAD
    """
    if h < 1 or w < 1:
        raise KernelError(f"graph needs h, w >= 1, got {h}x{w}")
    n, k, p = h * w, cfg.k, cfg.p
    ys, xs = np.divmod(np.arange(n), w)
    offsets = np.arange(-p, p + 1)
    ny = ys[:, None, None] + offsets[None, :, None]
    nx = xs[:, None, None] + offsets[None, None, :]
    inside = (ny >= 0) & (ny < h) & (nx >= 0) & (nx < w)
    neighbors = np.where(inside, ny * w + nx, PAD).reshape(n, k * k).astype(np.int64)

    dense_mask = np.zeros((n, n), dtype=bool)
    rows = np.repeat(np.arange(n), k * k)
    cols = neighbors.ravel()
    real = cols != PAD
    dense_mask[rows[real], cols[real]] = True
    return PgaGraph(h, w, k, neighbors, dense_mask)


def _check_graph(f: FeatureMap, wts: PamWeights, graph: PgaGraph):
    if (graph.h, graph.w) != (f.h, f.w):
        raise ShapeMismatchError(f"graph is for {graph.h}x{graph.w}, features are {f.h}x{f.w}")
    if wts.c != f.c:
        raise ShapeMismatchError(f"weights are for {wts.c} channels, input has {f.c}")


def _node_features(x: np.ndarray, wts: PamWeights):
    """Transformed query/key/value node features, each [n, c]"""
    c, h, w = x.shape
    maps = [linear_array(x[None], lw)[0].reshape(c, h * w).T for _, lw in wts.items()]
    return maps[0], maps[1], maps[2]


def pga_reference(f: FeatureMap, wts: PamWeights, graph: PgaGraph) -> FeatureMap:
    """
    Dense-adjacency graph attention, single threaded
    Scores for every node pair form an n x n matrix, masked to -inf outside
    the adjacency matrix. Each node then normalizes over its adjacency row.
    Window slots that fall outside the image count as zero-feature nodes:
    score 0, value 0.
    """
    _check_graph(f, wts, graph)
    wts = wts.astype(f.dtype)
    n = graph.n
    pad_counts = np.count_nonzero(graph.neighbors == PAD, axis=1)
    get_logger().log_debug(f"pga_reference materializing {n}x{n} scores for {f.shape}")

    out = np.empty((f.b, n, f.c), dtype=f.dtype)
    for item in range(f.b):
        q, keys, values = _node_features(f.data[item], wts)
        scores = q @ keys.T  # [n, n]
        scores /= math.sqrt(f.c)
        masked = np.where(graph.dense_mask, scores, -np.inf)
        del scores
        for node in range(n):
            row = masked[node]
            peak = row.max()
            if pad_counts[node]:
                peak = max(peak, 0.0)
            weights = np.exp(row - peak)
            denom = weights.sum() + pad_counts[node] * math.exp(-peak)
            out[item, node] = (weights @ values) / denom
    return FeatureMap(out.transpose(0, 2, 1).reshape(f.shape), copy=False)


def pga_adjacency_list(f: FeatureMap, wts: PamWeights, graph: PgaGraph) -> FeatureMap:
    """Neighbor-list variant of pga_reference, used only as a second correctness check"""
    _check_graph(f, wts, graph)
    wts = wts.astype(f.dtype)
    n, k2 = graph.n, graph.k2
    scale = 1.0 / math.sqrt(f.c)

    out = np.empty((f.b, n, f.c), dtype=f.dtype)
    for item in range(f.b):
        q, keys, values = _node_features(f.data[item], wts)
        for node in range(n):
            slots = graph.neighbors[node]
            real = slots != PAD
            slot_keys = np.zeros((k2, f.c), dtype=f.dtype)
            slot_values = np.zeros((k2, f.c), dtype=f.dtype)
            slot_keys[real] = keys[slots[real]]
            slot_values[real] = values[slots[real]]
            att = softmax_lastdim((slot_keys @ q[node]) * scale)
            out[item, node] = att @ slot_values
    return FeatureMap(out.transpose(0, 2, 1).reshape(f.shape), copy=False)
