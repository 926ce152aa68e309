"""
Image demo: pixel shuffle upsampling followed by pixel adapter refinement
Writes the shuffled image and the refined image as plain PGM so the two
can be compared side by side.
"""

from typing import Optional, Tuple

import numpy as np

from attention.pam import pam_forward
from config_manager import HogConfig
from data_models import FeatureMap, LinearWeights, PamWeights, SeededRng, WindowConfig
from helpers.constants import (DEFAULT_WINDOW, DEMO_LIFT_SEED_OFFSET, DEMO_PAM_SEED_OFFSET, DEMO_UPSCALE,
                               PGM_MAX_VALUE)
from helpers.images import read_pgm, rescale_to_bytes, write_pgm
from helpers.logger import get_logger
from losses.reconstruction import ir_loss
from tensor_core import pixel_shuffle, pointwise_linear

DEMO_CHANNELS = 4


def demo_lift(seed: int, channels: int = DEMO_CHANNELS, r: int = DEMO_UPSCALE) -> LinearWeights:
    """
    1 -> channels*r^2 pointwise transform
    All r^2 sub-pixel outputs of a channel share one weight and bias, so a
    constant image stays constant through the shuffle.
    """
    rng = SeededRng(seed + DEMO_LIFT_SEED_OFFSET)
    weight = rng.uniform((channels,))
    bias = rng.uniform((channels,))
    return LinearWeights(np.repeat(weight, r * r)[:, None], np.repeat(bias, r * r))


def gray_plane(f: FeatureMap) -> np.ndarray:
    """Channel mean of the single image in f, rescaled to 0..255"""
    return rescale_to_bytes(f.data[0].mean(axis=0))


def run_demo(in_path: str, out_prefix: str, seed: int, k: int = DEFAULT_WINDOW,
             threads: int = 1, hog_cfg: Optional[HogConfig] = None) -> Tuple[str, str, float]:
    """
    Args:
        hog_cfg: HOG parameters and contour weight for the refinement loss
    Returns:
        paths of <prefix>_shuffle.pgm and <prefix>_pam.pgm, and the
        reconstruction loss between the shuffled and the refined map
    """
    hog_cfg = hog_cfg or HogConfig()
    r = DEMO_UPSCALE
    pixels = read_pgm(in_path)
    image = FeatureMap((pixels / float(PGM_MAX_VALUE))[None, None])
    lifted = pointwise_linear(image, demo_lift(seed, DEMO_CHANNELS, r))
    shuffled = pixel_shuffle(lifted, r)
    wts = PamWeights.random(SeededRng(seed + DEMO_PAM_SEED_OFFSET), DEMO_CHANNELS)
    refined, _ = pam_forward(shuffled, wts, WindowConfig(k), threads)
    change = ir_loss(shuffled, refined, hog_cfg.params, hog_cfg.lca_weight)

    shuffle_path = f"{out_prefix}_shuffle.pgm"
    pam_path = f"{out_prefix}_pam.pgm"
    write_pgm(shuffle_path, gray_plane(shuffled), f"pixel shuffle r={r}")
    write_pgm(pam_path, gray_plane(refined), f"pixel adapter k={k}")
    get_logger().log_info(f"demo {pixels.shape[1]}x{pixels.shape[0]} -> "
                          f"{shuffled.w}x{shuffled.h}: {shuffle_path}, {pam_path}, "
                          f"refinement loss {change:.6g} (lca_weight={hog_cfg.lca_weight})")
    return shuffle_path, pam_path, change
