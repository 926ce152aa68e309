"""
Pixel adapter attention
Each pixel attends over its zero-padded k x k window: queries come from a
1x1 transform of the pixel itself, keys and values from sliding-window
extraction of transformed maps.
"""

import math
from typing import List, Tuple

import numpy as np

from data_models import FeatureMap, LinearWeights, PamGradients, PamWeights, RelationTensor, WindowConfig
from errors import ShapeMismatchError
from helpers.logger import get_logger
from tensor_core import fold_array, linear_array, map_batches, softmax_lastdim, unfold_array


def _check_inputs(f: FeatureMap, wts: PamWeights, cfg: WindowConfig):
    if wts.c != f.c:
        raise ShapeMismatchError(f"weights are for {wts.c} channels, input has {f.c}")
    cfg.check_fits(f.h, f.w)


def _attend(x: np.ndarray, wts: PamWeights, cfg: WindowConfig):
    """Unfolded forward pass, keeping the window tensors the backward pass reuses"""
    b, c, h, w = x.shape
    n, k2 = h * w, cfg.k2
    # [b,c,h,w] -> [b,n,c]
    q = linear_array(x, wts.theta).reshape(b, c, n).transpose(0, 2, 1)
    # [b,c*k*k,n] -> [b,c,k*k,n] -> [b,n,c,k*k]
    keys = unfold_array(linear_array(x, wts.phi), cfg).reshape(b, c, k2, n).transpose(0, 3, 1, 2)
    # [b,c*k*k,n] -> [b,c,k*k,n] -> [b,n,k*k,c]
    values = unfold_array(linear_array(x, wts.omega), cfg).reshape(b, c, k2, n).transpose(0, 3, 2, 1)
    logits = np.einsum('bnc,bnck->bnk', q, keys) / math.sqrt(c)
    att = softmax_lastdim(logits)
    out = np.einsum('bnk,bnkc->bnc', att, values)
    out = out.transpose(0, 2, 1).reshape(b, c, h, w)
    return out, att, q, keys, values


def _slot_window(padded: np.ndarray, slot: int, k: int, h: int, w: int) -> np.ndarray:
    dy, dx = divmod(slot, k)
    return padded[:, :, dy:dy + h, dx:dx + w]


def _forward_item(x: np.ndarray, wts: PamWeights, cfg: WindowConfig):
    """
    Forward pass without window copies: keys and values are padded once and
    every window slot is read as a shifted view, so only [b, n, k*k]
    attention tensors are materialized
    """
    b, c, h, w = x.shape
    k, p = cfg.k, cfg.p
    pad = ((0, 0), (0, 0), (p, p), (p, p))
    q = linear_array(x, wts.theta)
    keys = np.pad(linear_array(x, wts.phi), pad, mode='constant')

    logits = np.empty((b, h, w, cfg.k2), dtype=x.dtype)
    for slot in range(cfg.k2):
        logits[..., slot] = np.einsum('bchw,bchw->bhw', q, _slot_window(keys, slot, k, h, w)) / math.sqrt(c)
    del q, keys
    att = softmax_lastdim(logits.reshape(b, h * w, cfg.k2))
    del logits

    values = np.pad(linear_array(x, wts.omega), pad, mode='constant')
    weights = att.reshape(b, 1, h, w, cfg.k2)
    out = np.zeros_like(x)
    for slot in range(cfg.k2):
        out += weights[..., slot] * _slot_window(values, slot, k, h, w)
    return out, att


def pam_forward(f: FeatureMap, wts: PamWeights, cfg: WindowConfig,
                threads: int = 1) -> Tuple[FeatureMap, RelationTensor]:
    """
    Window graph attention over every pixel
    Args:
        f: input map [b, c, h, w]
        wts: theta/phi/omega transforms, all [c, c]
        cfg: window configuration
        threads: batch items processed in parallel
    Returns:
        updated map [b, c, h, w] and the attention [b, h*w, k*k]
    """
    _check_inputs(f, wts, cfg)
    wts = wts.astype(f.dtype)
    results = map_batches(lambda i: _forward_item(f.data[i:i + 1], wts, cfg), f.b, threads)
    out = np.concatenate([r[0] for r in results], axis=0)
    att = np.concatenate([r[1] for r in results], axis=0)
    return FeatureMap(out, copy=False), RelationTensor(att)


def pam_stack(f: FeatureMap, layers: List[PamWeights], cfg: WindowConfig, threads: int = 1) -> FeatureMap:
    """Apply several pixel adapter refinements in sequence"""
    for wts in layers:
        f, _ = pam_forward(f, wts, cfg, threads)
    return f


def _linear_backward(x: np.ndarray, dy: np.ndarray, wts: LinearWeights):
    """Gradients of y = W x + bias given dy, all maps [b, c, h, w]"""
    b, c_in, h, w = x.shape
    x_flat = x.reshape(b, c_in, h * w)
    dy_flat = dy.reshape(b, wts.c_out, h * w)
    d_w = np.einsum('bon,bin->oi', dy_flat, x_flat)
    d_bias = dy_flat.sum(axis=(0, 2))
    d_x = np.matmul(wts.w.T, dy_flat).reshape(b, c_in, h, w)
    return d_w, d_bias, d_x


def _backward_item(x: np.ndarray, g: np.ndarray, wts: PamWeights, cfg: WindowConfig):
    b, c, h, w = x.shape
    n, k2 = h * w, cfg.k2
    scale = 1.0 / math.sqrt(c)
    _, att, q, keys, values = _attend(x, wts, cfg)
    grad = g.reshape(b, c, n).transpose(0, 2, 1)  # [b,n,c]

    d_att = np.einsum('bnc,bnkc->bnk', grad, values)
    d_values = att[:, :, :, None] * grad[:, :, None, :]
    d_logits = att * (d_att - np.sum(att * d_att, axis=-1, keepdims=True))
    d_q = np.einsum('bnk,bnck->bnc', d_logits, keys) * scale
    d_keys = d_logits[:, :, None, :] * q[:, :, :, None] * scale

    d_q_map = d_q.transpose(0, 2, 1).reshape(b, c, h, w)
    d_k_map = fold_array(d_keys.transpose(0, 2, 3, 1).reshape(b, c * k2, n), cfg, h, w)
    d_v_map = fold_array(d_values.transpose(0, 3, 2, 1).reshape(b, c * k2, n), cfg, h, w)

    grads = {}
    d_input = np.zeros_like(x)
    for name, lw, d_map in (('theta', wts.theta, d_q_map), ('phi', wts.phi, d_k_map),
                            ('omega', wts.omega, d_v_map)):
        d_w, d_bias, d_x = _linear_backward(x, d_map, lw)
        grads[name] = (d_w, d_bias)
        d_input += d_x
    return d_input, grads


def pam_backward(f: FeatureMap, wts: PamWeights, cfg: WindowConfig, upstream: FeatureMap,
                 threads: int = 1) -> PamGradients:
    """
    Analytic gradients of sum(upstream * pam_forward(f)) with respect to f, theta, phi and omega
    """
    _check_inputs(f, wts, cfg)
    if upstream.shape != f.shape:
        raise ShapeMismatchError(f"upstream gradient {upstream.shape} does not match output {f.shape}")
    wts = wts.astype(f.dtype)
    get_logger().log_debug(f"pam_backward on {f.shape}, k={cfg.k}")
    results = map_batches(
        lambda i: _backward_item(f.data[i:i + 1], upstream.data[i:i + 1], wts, cfg), f.b, threads)

    d_input = np.concatenate([r[0] for r in results], axis=0)
    summed = {}
    for name, lw in wts.items():
        d_w = np.zeros_like(lw.w)
        d_bias = np.zeros_like(lw.bias)
        # fixed batch order keeps the sum reproducible
        for _, grads in results:
            d_w += grads[name][0]
            d_bias += grads[name][1]
        summed[name] = LinearWeights(d_w, d_bias)
    return PamGradients(FeatureMap(d_input, copy=False), summed['theta'], summed['phi'], summed['omega'])
