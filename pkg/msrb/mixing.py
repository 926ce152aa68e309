"""
Multi-axis mixing for the sequential residual block
Axial fully-connected mixing along height and width, the wave-based
dynamic fusion and the pointwise feed-forward MLP.
"""

import numpy as np

from data_models import FeatureMap, MsrbWeights
from errors import KernelError, ShapeMismatchError
from tensor_core import gelu, linear_array

AXIS_HEIGHT = 'height'
AXIS_WIDTH = 'width'


def check_block_input(f: FeatureMap, wts: MsrbWeights):
    if (f.c, f.h, f.w) != (wts.channels, wts.height, wts.width):
        raise ShapeMismatchError(
            f"block weights are for [{wts.channels}, {wts.height}, {wts.width}], "
            f"input is [{f.c}, {f.h}, {f.w}]")


def axial_array(x: np.ndarray, axis: str, matrix: np.ndarray) -> np.ndarray:
    """Mix every fiber along `axis` of a raw [b, c, h, w] array with a square matrix"""
    matrix = np.asarray(matrix)
    if axis == AXIS_HEIGHT:
        side = x.shape[2]
    elif axis == AXIS_WIDTH:
        side = x.shape[3]
    else:
        raise KernelError(f"axis must be '{AXIS_HEIGHT}' or '{AXIS_WIDTH}', got '{axis}'")
    if matrix.shape != (side, side):
        raise ShapeMismatchError(f"{axis} mixing needs a [{side}, {side}] matrix, got {list(matrix.shape)}")
    matrix = matrix.astype(x.dtype, copy=False)
    if axis == AXIS_HEIGHT:
        # [h,h] @ [b,c,h,w]
        return np.matmul(matrix, x)
    return np.matmul(x, matrix.T)


def axial_fc(f: FeatureMap, axis: str, matrix: np.ndarray) -> FeatureMap:
    """
    Full-axis fully-connected layer
    Args:
        f: input map
        axis: 'height' mixes columns, 'width' mixes rows
        matrix: square, side equal to the chosen axis length
    Returns:
        map where every fiber along `axis` is replaced by matrix @ fiber
    """
    return FeatureMap(axial_array(f.data, axis, matrix), copy=False)


def patm_array(x: np.ndarray, wts: MsrbWeights) -> np.ndarray:
    z = linear_array(x, wts.channel_fc)
    theta = linear_array(x, wts.phase_fc)
    z_cos = z * np.cos(theta)
    z_sin = z * np.sin(theta)
    mixed = (axial_array(z_cos, AXIS_HEIGHT, wts.amp_t_h) + axial_array(z_sin, AXIS_HEIGHT, wts.amp_i_h)
             + axial_array(z_cos, AXIS_WIDTH, wts.amp_t_w) + axial_array(z_sin, AXIS_WIDTH, wts.amp_i_w))
    return linear_array(mixed, wts.fuse_fc)


def patm_fuse(f: FeatureMap, wts: MsrbWeights) -> FeatureMap:
    """
    Wave-based dynamic fusion
    Features are treated as waves: channel_fc gives the amplitude z and
    phase_fc the phase theta. Each spatial axis mixes z*cos(theta) and
    z*sin(theta) with its own pair of full-axis matrices; the branches are
    summed and passed through fuse_fc.
    """
    check_block_input(f, wts)
    return FeatureMap(patm_array(f.data, wts), copy=False)


def madm_array(x: np.ndarray, wts: MsrbWeights) -> np.ndarray:
    branches = (axial_array(x, AXIS_HEIGHT, wts.axial_h) + axial_array(x, AXIS_WIDTH, wts.axial_w)
                + linear_array(x, wts.channel_mix))
    return x + patm_array(branches, wts)


def madm(f: FeatureMap, wts: MsrbWeights) -> FeatureMap:
    """Height, width and channel branches fused by patm_fuse, plus the residual input"""
    check_block_input(f, wts)
    return FeatureMap(madm_array(f.data, wts), copy=False)


def ffn_array(x: np.ndarray, wts: MsrbWeights) -> np.ndarray:
    return x + linear_array(gelu(linear_array(x, wts.ffn_in)), wts.ffn_out)


def mlp_ffn(f: FeatureMap, wts: MsrbWeights) -> FeatureMap:
    """Pointwise two-layer MLP with GELU in between, plus the residual input"""
    if f.c != wts.ffn_in.c_in:
        raise ShapeMismatchError(f"feed-forward expects {wts.ffn_in.c_in} channels, input has {f.c}")
    return FeatureMap(ffn_array(f.data, wts), copy=False)
