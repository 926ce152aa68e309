import math

import numpy as np
import numpy.testing as npt
import pytest

from attention.baselines import global_attention, halo_attention
from attention.flops import flops_estimate
from data_models import PamWeights, WindowConfig
from errors import KernelError, ShapeMismatchError


def transforms(x, wts):
    return [np.einsum('oc,chw->ohw', lw.w, x) + lw.bias[:, None, None] for _, lw in wts.items()]


def halo_loops(x, wts, block, halo):
    _, c, h, w = x.shape
    q, key, val = transforms(x[0], wts)
    out = np.zeros_like(x)
    for y in range(h):
        for xx in range(w):
            y0, x0 = (y // block) * block - halo, (xx // block) * block - halo
            scores, values = [], []
            for sy in range(y0, y0 + block + 2 * halo):
                for sx in range(x0, x0 + block + 2 * halo):
                    if 0 <= sy < h and 0 <= sx < w:
                        scores.append(q[:, y, xx] @ key[:, sy, sx] / math.sqrt(c))
                        values.append(val[:, sy, sx])
                    else:
                        scores.append(0.0)
                        values.append(np.zeros(c))
            e = np.exp(np.array(scores) - max(scores))
            out[0, :, y, xx] = (e / e.sum()) @ np.array(values)
    return out


def global_loops(x, wts):
    _, c, h, w = x.shape
    q, key, val = (t.reshape(c, h * w) for t in transforms(x[0], wts))
    out = np.zeros((c, h * w))
    for i in range(h * w):
        scores = np.array([q[:, i] @ key[:, j] for j in range(h * w)]) / math.sqrt(c)
        e = np.exp(scores - scores.max())
        for j in range(h * w):
            out[:, i] += e[j] / e.sum() * val[:, j]
    return out.reshape(1, c, h, w)


def test_halo_matches_loops(rng):
    f = rng.feature_map(1, 4, 4, 4)
    wts = PamWeights.random(rng, 4, bias=True)
    out = halo_attention(f, wts, block=2, halo=1)
    npt.assert_allclose(out.data, halo_loops(f.data, wts, 2, 1), atol=1e-12)


def test_halo_single_tile_equals_global(rng):
    f = rng.feature_map(2, 3, 8, 8)
    wts = PamWeights.random(rng, 3)
    npt.assert_allclose(halo_attention(f, wts, block=8, halo=0).data, global_attention(f, wts).data,
                        atol=1e-12)


def test_halo_rejects_bad_tiling(rng):
    wts = PamWeights.identity(2)
    with pytest.raises(ShapeMismatchError):
        halo_attention(rng.feature_map(1, 2, 6, 8), wts, block=4, halo=1)
    with pytest.raises(KernelError):
        halo_attention(rng.feature_map(1, 2, 8, 8), wts, block=4, halo=-1)
    with pytest.raises(ShapeMismatchError):
        halo_attention(rng.feature_map(1, 3, 8, 8), wts, block=4, halo=1)


def test_global_single_pixel_is_value_transform(rng):
    f = rng.feature_map(2, 3, 1, 1)
    wts = PamWeights.random(rng, 3, bias=True)
    expected = np.einsum('oc,bc->bo', wts.omega.w, f.data[:, :, 0, 0]) + wts.omega.bias
    npt.assert_allclose(global_attention(f, wts).data[:, :, 0, 0], expected, atol=1e-14)


def test_global_matches_loops(rng):
    f = rng.feature_map(1, 3, 4, 4)
    wts = PamWeights.random(rng, 3, bias=True)
    npt.assert_allclose(global_attention(f, wts).data, global_loops(f.data, wts), atol=1e-12)


def test_flop_estimates():
    cfg = WindowConfig(3)
    assert flops_estimate('pam', 1, 4, 4, 4, cfg) == 1152
    assert flops_estimate('global', 1, 4, 4, 4) == 2048
    assert flops_estimate('pga', 1, 4, 4, 4, cfg) == 2048
    assert flops_estimate('halo', 2, 4, 8, 8, block=4, halo=1) == 2 * 2 * 64 * 36 * 4


def test_flop_ratio_is_pixels_over_window():
    cfg = WindowConfig(3)
    for side in (16, 32, 64):
        ratio = flops_estimate('global', 1, 8, side, side) / flops_estimate('pam', 1, 8, side, side, cfg)
        assert ratio == pytest.approx(side * side / 9)


def test_flop_estimate_errors():
    with pytest.raises(KernelError):
        flops_estimate('pam', 1, 4, 4, 4)
    with pytest.raises(KernelError):
        flops_estimate('conv', 1, 4, 4, 4)
