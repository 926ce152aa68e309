"""
Finite-difference check of the pixel adapter backward pass
The scalar checked is L = sum(G * pam_forward(x)) for a fixed random
upstream map G, so dL/dout = G.
"""

from typing import Dict

import numpy as np

from attention.pam import pam_backward, pam_forward
from config_manager import GradcheckConfig
from data_models import FeatureMap, LinearWeights, PamWeights, SeededRng, VerifyReport, WindowConfig
from errors import KernelError
from helpers.constants import GRADCHECK_DENOM_FLOOR
from helpers.logger import get_logger

GRADCHECK_SHAPE = (1, 3, 5, 5)
GRADCHECK_WINDOW = 3
TRANSFORMS = ('theta', 'phi', 'omega')


def _assemble(arrays: Dict[str, np.ndarray]):
    f = FeatureMap(arrays['input'])
    wts = PamWeights(*(LinearWeights(arrays[f"{name}.w"], arrays[f"{name}.bias"]) for name in TRANSFORMS))
    return f, wts


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """max |a - n| / max(|a|, |n|, floor) over all coordinates"""
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), GRADCHECK_DENOM_FLOOR)
    return float(np.max(np.abs(analytic - numeric) / denom)) if analytic.size else 0.0


def numerical_grads(arrays: Dict[str, np.ndarray], upstream: np.ndarray, cfg: WindowConfig,
                    eps: float) -> Dict[str, np.ndarray]:
    """Central differences for every coordinate of every array"""

    def forward_output() -> np.ndarray:
        f, wts = _assemble(arrays)
        out, _ = pam_forward(f, wts, cfg)
        return out.data

    grads = {}
    for name, param in arrays.items():
        g = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            old = param[idx]
            param[idx] = old + eps
            plus = forward_output()
            param[idx] = old - eps
            minus = forward_output()
            param[idx] = old
            # difference the outputs first, then reduce
            g[idx] = np.sum(upstream * (plus - minus)) / (2 * eps)
        grads[name] = g
    return grads


def run_gradcheck(seed: int, cfg: GradcheckConfig) -> VerifyReport:
    """
    Compare pam_backward with central differences on a [1,3,5,5], k=3 instance
    Returns:
        one report case per gradient tensor, holding its worst relative error
    """
    if cfg.eps <= 0:
        raise KernelError(f"eps must be > 0, got {cfg.eps}")
    if cfg.tol <= 0:
        raise KernelError(f"tol must be > 0, got {cfg.tol}")
    rng = SeededRng(seed)
    b, c, h, w = GRADCHECK_SHAPE
    window = WindowConfig(GRADCHECK_WINDOW)
    f = rng.feature_map(b, c, h, w)
    wts = PamWeights.random(rng, c, bias=True)
    upstream = rng.feature_map(b, c, h, w)

    analytic = pam_backward(f, wts, window, upstream)
    expected = {'input': analytic.d_input.data}
    for name, lw in analytic.items():
        expected[f"{name}.w"] = lw.w
        expected[f"{name}.bias"] = lw.bias

    arrays = {'input': np.array(f.data)}
    for name, lw in wts.items():
        arrays[f"{name}.w"] = lw.w.copy()
        arrays[f"{name}.bias"] = lw.bias.copy()
    numeric = numerical_grads(arrays, upstream.data, window, cfg.eps)

    report = VerifyReport(f"gradcheck seed={seed} eps={cfg.eps:g} tol={cfg.tol:g}")
    shape = f"[{b},{c},{h},{w}] k={GRADCHECK_WINDOW}"
    for name in arrays:
        err = relative_error(expected[name], numeric[name])
        get_logger().log_debug(f"gradcheck {name}: relative error {err:.3e}")
        report.add_case(f"d_{name}", shape, err, cfg.tol)
    return report
