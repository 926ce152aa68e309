"""
MLP-based sequential residual block and the reconstruction path
msrb_forward(i_lr, h_t) = blstm([mlp_ffn(madm(i_lr)), h_t])
"""

from typing import List, Optional

import numpy as np

from attention.pam import pam_forward
from data_models import ClueMap, FeatureMap, LinearWeights, MsrbWeights, PamWeights, SeededRng, WindowConfig
from errors import KernelError, ShapeMismatchError
from helpers.constants import DEFAULT_MSRB_LAYERS
from helpers.logger import get_logger
from msrb.lstm import blstm_forward
from msrb.mixing import check_block_input, ffn_array, madm_array
from tensor_core import pixel_shuffle, pointwise_linear


def _check_clues(i_lr: FeatureMap, h_t: ClueMap, wts: MsrbWeights):
    b, c_t, h, w = h_t.values.shape
    if (b, h, w) != (i_lr.b, i_lr.h, i_lr.w):
        raise ShapeMismatchError(
            f"clue map is [{b}, {c_t}, {h}, {w}], features are {list(i_lr.shape)}")
    if c_t != wts.clue_channels:
        raise ShapeMismatchError(f"block expects {wts.clue_channels} clue channels, got {c_t}")


def msrb_forward(i_lr: FeatureMap, h_t: Optional[ClueMap], wts: MsrbWeights, threads: int = 1) -> FeatureMap:
    """
    One sequential residual block
    Args:
        i_lr: low-resolution features [b, c, h, w]
        h_t: text clues [b, c_t, h, w]; None means an empty clue map
        wts: block parameters
    Returns:
        map with the same dims as i_lr
    """
    check_block_input(i_lr, wts)
    if h_t is None:
        h_t = ClueMap.zeros(i_lr.b, 0, i_lr.h, i_lr.w)
    _check_clues(i_lr, h_t, wts)
    features = ffn_array(madm_array(i_lr.data, wts), wts)
    clues = h_t.values.astype(features.dtype, copy=False)
    joined = FeatureMap(np.concatenate([features, clues], axis=1), copy=False)
    return blstm_forward(joined, wts.lstm_fwd, wts.lstm_bwd, wts.proj, threads)


def msrb_stack(i_lr: FeatureMap, h_t: Optional[ClueMap], layers: List[MsrbWeights],
               threads: int = 1) -> FeatureMap:
    """Blocks applied in sequence; every block sees the same clue map"""
    x = i_lr
    for wts in layers:
        x = msrb_forward(x, h_t, wts, threads)
    return x


def random_msrb_layers(rng: SeededRng, channels: int, height: int, width: int, clue_channels: int = 0,
                       depth: int = DEFAULT_MSRB_LAYERS) -> List[MsrbWeights]:
    if depth < 1:
        raise KernelError(f"block depth must be >= 1, got {depth}")
    return [MsrbWeights.random(rng, channels, height, width, clue_channels) for _ in range(depth)]


def super_resolve(i_lr: FeatureMap, h_t: Optional[ClueMap], msrb_layers: List[MsrbWeights],
                  lift: LinearWeights, pam_weights: PamWeights, r: int, cfg: WindowConfig,
                  threads: int = 1) -> FeatureMap:
    """
    Reconstruction path: blocks, pointwise lift to c*r^2 channels, pixel
    shuffle, then pixel adapter refinement. The rectification stage in front
    of the blocks is taken as identity.
    Returns:
        map [b, pam_weights.c, h*r, w*r]
    """
    if r < 1:
        raise KernelError(f"upscale factor must be >= 1, got {r}")
    if lift.c_out != pam_weights.c * r * r:
        raise ShapeMismatchError(
            f"lift produces {lift.c_out} channels, shuffle at r={r} needs {pam_weights.c * r * r}")
    features = msrb_stack(i_lr, h_t, msrb_layers, threads)
    upsampled = pixel_shuffle(pointwise_linear(features, lift), r)
    get_logger().log_debug(f"super_resolve {list(i_lr.shape)} -> {list(upsampled.shape)}")
    out, _ = pam_forward(upsampled, pam_weights, cfg, threads)
    return out
