"""
Reconstruction losses
pix_loss compares pixels, lca_loss compares HOG descriptors, ir_loss is
their weighted sum.
"""

from typing import Optional

import numpy as np

from data_models import FeatureMap, HogParams
from errors import KernelError, ShapeMismatchError
from helpers.constants import DEFAULT_LCA_WEIGHT, LCA_DISTANCES, PIX_REDUCTIONS
from losses.hog import hog


def _check_pair(hr: FeatureMap, sr: FeatureMap):
    if hr.shape != sr.shape:
        raise ShapeMismatchError(f"cannot compare {list(hr.shape)} with {list(sr.shape)}")


def lca_loss(hr: FeatureMap, sr: FeatureMap, params: Optional[HogParams] = None,
             distance: str = 'l1') -> float:
    """
    Contour loss: distance between HOG descriptors, summed over the batch
    Args:
        distance: 'l1' (default) or 'l2'
    """
    _check_pair(hr, sr)
    if distance not in LCA_DISTANCES:
        raise KernelError(f"distance must be one of {LCA_DISTANCES}, got '{distance}'")
    params = params or HogParams()
    total = 0.0
    for i in range(hr.b):
        diff = hog(hr.select(i), params).values - hog(sr.select(i), params).values
        if distance == 'l1':
            total += float(np.sum(np.abs(diff)))
        else:
            total += float(np.sqrt(np.sum(diff * diff)))
    return total


def pix_loss(hr: FeatureMap, sr: FeatureMap, reduction: str = 'norm') -> float:
    """
    Pixel loss
    Args:
        reduction: 'norm' gives the L2 norm of the difference, 'mean' the mean squared difference
    """
    _check_pair(hr, sr)
    if reduction not in PIX_REDUCTIONS:
        raise KernelError(f"reduction must be one of {PIX_REDUCTIONS}, got '{reduction}'")
    diff = hr.data.astype(np.float64) - sr.data.astype(np.float64)
    squared = float(np.sum(diff * diff))
    if reduction == 'norm':
        return float(np.sqrt(squared))
    return squared / diff.size


def ir_loss(hr: FeatureMap, sr: FeatureMap, params: Optional[HogParams] = None,
            lca_weight: float = DEFAULT_LCA_WEIGHT, distance: str = 'l1', reduction: str = 'norm') -> float:
    """Image reconstruction loss: pix_loss + lca_weight * lca_loss"""
    if lca_weight < 0:
        raise KernelError(f"lca_weight must be >= 0, got {lca_weight}")
    pix = pix_loss(hr, sr, reduction)
    if lca_weight == 0:
        _check_pair(hr, sr)
        return pix
    return pix + lca_weight * lca_loss(hr, sr, params, distance)
