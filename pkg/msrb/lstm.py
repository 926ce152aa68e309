"""
Bidirectional LSTM over the width axis
Every (batch, row) pair is one sequence whose steps are the pixels of the
row from left to right; the step feature is the channel vector.

Cell equations, gate rows stacked as input, forget, cell, output:
    i = sigmoid(W_i x + U_i h + b_i)
    f = sigmoid(W_f x + U_f h + b_f)
    g = tanh(W_g x + U_g h + b_g)
    o = sigmoid(W_o x + U_o h + b_o)
    c' = f * c + i * g
    h' = o * tanh(c')
Both directions start from h = c = 0.
"""

from typing import Tuple

import numpy as np

from data_models import FeatureMap, LinearWeights, LstmWeights
from errors import ShapeMismatchError
from tensor_core import linear_array, map_batches, sigmoid


def lstm_cell(x: np.ndarray, h: np.ndarray, c: np.ndarray,
              wts: LstmWeights) -> Tuple[np.ndarray, np.ndarray]:
    """
    One step for a batch of sequences
    Args:
        x: step inputs [rows, input_size]
        h: previous hidden state [rows, hidden]
        c: previous cell state [rows, hidden]
    Returns:
        next (h, c)
    """
    hidden = wts.hidden_size
    gates = x @ wts.w_ih.T.astype(x.dtype, copy=False) + h @ wts.w_hh.T.astype(x.dtype, copy=False) \
        + wts.bias.astype(x.dtype, copy=False)
    i = sigmoid(gates[:, :hidden])
    f = sigmoid(gates[:, hidden:2 * hidden])
    g = np.tanh(gates[:, 2 * hidden:3 * hidden])
    o = sigmoid(gates[:, 3 * hidden:])
    c_next = f * c + i * g
    return o * np.tanh(c_next), c_next


def lstm_sequence(seq: np.ndarray, wts: LstmWeights, reverse: bool = False) -> np.ndarray:
    """
    Run one direction over [rows, steps, input_size]
    Returns:
        hidden states [rows, steps, hidden], aligned with the input steps
    """
    rows, steps, _ = seq.shape
    h = np.zeros((rows, wts.hidden_size), dtype=seq.dtype)
    c = np.zeros_like(h)
    out = np.empty((rows, steps, wts.hidden_size), dtype=seq.dtype)
    order = range(steps - 1, -1, -1) if reverse else range(steps)
    for t in order:
        h, c = lstm_cell(seq[:, t], h, c, wts)
        out[:, t] = h
    return out


def _blstm_item(x: np.ndarray, fwd: LstmWeights, bwd: LstmWeights, proj: LinearWeights) -> np.ndarray:
    b, channels, height, width = x.shape
    # [b,c,h,w] -> [b*h, w, c]
    seq = x.transpose(0, 2, 3, 1).reshape(b * height, width, channels)
    summed = lstm_sequence(seq, fwd) + lstm_sequence(seq, bwd, reverse=True)
    # [b*h, w, hidden] -> [b, hidden, h, w]
    hidden = summed.reshape(b, height, width, -1).transpose(0, 3, 1, 2)
    return linear_array(np.ascontiguousarray(hidden), proj)


def blstm_forward(f: FeatureMap, fwd: LstmWeights, bwd: LstmWeights, proj: LinearWeights,
                  threads: int = 1) -> FeatureMap:
    """
    Bidirectional LSTM along width
    The two direction outputs are summed and projected back with `proj`.
    Rows are independent, so batch items may run in parallel.
    """
    if fwd.input_size != f.c or bwd.input_size != f.c:
        raise ShapeMismatchError(
            f"LSTM input sizes are {fwd.input_size}/{bwd.input_size}, input has {f.c} channels")
    if fwd.hidden_size != bwd.hidden_size or proj.c_in != fwd.hidden_size:
        raise ShapeMismatchError("LSTM hidden sizes and projection do not agree")
    parts = map_batches(lambda i: _blstm_item(f.data[i:i + 1], fwd, bwd, proj), f.b, threads)
    return FeatureMap(np.concatenate(parts, axis=0), copy=False)
