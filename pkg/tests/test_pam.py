import math

import numpy as np
import numpy.testing as npt
import pytest

from attention.pam import _attend, pam_backward, pam_forward, pam_stack
from attention.pga import build_pixel_graph, pga_reference
from data_models import FeatureMap, LinearWeights, PamWeights, SeededRng, WindowConfig
from errors import ShapeMismatchError, WindowConfigError
from helpers.constants import ORACLE_TOLERANCE, SOFTMAX_TOLERANCE


def pam_loops(x, wts, k):
    """Per-pixel reference with explicit zero padding of the transformed maps"""
    b, c, h, w = x.shape
    p = k // 2
    out = np.zeros_like(x)
    for bi in range(b):
        q = np.einsum('oc,chw->ohw', wts.theta.w, x[bi]) + wts.theta.bias[:, None, None]
        key = np.einsum('oc,chw->ohw', wts.phi.w, x[bi]) + wts.phi.bias[:, None, None]
        val = np.einsum('oc,chw->ohw', wts.omega.w, x[bi]) + wts.omega.bias[:, None, None]
        for y in range(h):
            for xx in range(w):
                scores, values = [], []
                for dy in range(-p, p + 1):
                    for dx in range(-p, p + 1):
                        sy, sx = y + dy, xx + dx
                        if 0 <= sy < h and 0 <= sx < w:
                            scores.append(q[:, y, xx] @ key[:, sy, sx] / math.sqrt(c))
                            values.append(val[:, sy, sx])
                        else:
                            scores.append(0.0)
                            values.append(np.zeros(c))
                e = np.exp(np.array(scores) - max(scores))
                out[bi, :, y, xx] = (e / e.sum()) @ np.array(values)
    return out


def test_zero_input_gives_zero_output(rng):
    f = FeatureMap.zeros(2, 3, 5, 5)
    out, att = pam_forward(f, PamWeights.random(rng, 3), WindowConfig(3))
    npt.assert_array_equal(out.data, 0.0)
    npt.assert_allclose(att.values, 1.0 / 9.0, atol=1e-15)


def test_window_one_with_identity_is_identity(rng):
    f = rng.feature_map(2, 4, 5, 3)
    out, att = pam_forward(f, PamWeights.identity(4), WindowConfig(1))
    npt.assert_array_equal(att.values, 1.0)
    npt.assert_allclose(out.data, f.data, atol=1e-15)


@pytest.mark.parametrize("k", [1, 3, 5])
def test_matches_per_pixel_loops(rng, k):
    f = rng.feature_map(2, 3, 6, 5)
    wts = PamWeights.random(rng, 3, bias=True)
    out, _ = pam_forward(f, wts, WindowConfig(k))
    npt.assert_allclose(out.data, pam_loops(f.data, wts, k), atol=1e-12)


def test_matches_dense_graph_oracle(rng):
    f = rng.feature_map(1, 4, 6, 6)
    wts = PamWeights.random(rng, 4)
    cfg = WindowConfig(3)
    out, _ = pam_forward(f, wts, cfg)
    expected = pga_reference(f, wts, build_pixel_graph(6, 6, cfg))
    assert np.max(np.abs(out.data - expected.data)) <= ORACLE_TOLERANCE


def test_attention_rows_sum_to_one(rng):
    f = rng.feature_map(2, 4, 7, 5)
    _, att = pam_forward(f, PamWeights.random(rng, 4, bias=True), WindowConfig(5))
    assert att.values.shape == (2, 35, 25)
    assert np.all(att.values >= 0)
    npt.assert_allclose(att.row_sums(), 1.0, atol=SOFTMAX_TOLERANCE)


def test_output_is_local(rng):
    f = rng.feature_map(1, 3, 8, 8)
    wts = PamWeights.random(rng, 3)
    cfg = WindowConfig(3)
    changed = f.data.copy()
    changed[0, :, 0, 0] += 5.0
    before, _ = pam_forward(f, wts, cfg)
    after, _ = pam_forward(FeatureMap(changed), wts, cfg)
    # a single layer only reaches one window step from (0, 0)
    npt.assert_array_equal(before.data[0, :, 3:, :], after.data[0, :, 3:, :])
    npt.assert_array_equal(before.data[0, :, :, 3:], after.data[0, :, :, 3:])
    assert not np.array_equal(before.data[0, :, 1, 1], after.data[0, :, 1, 1])


def test_value_scaling_scales_output(rng):
    f = rng.feature_map(1, 4, 5, 5)
    wts = PamWeights.random(rng, 4)
    cfg = WindowConfig(3)
    base, _ = pam_forward(f, wts, cfg)
    for alpha in (0.5, -2.0, 3.0):
        scaled = PamWeights(wts.theta, wts.phi, wts.omega.scaled(alpha))
        out, _ = pam_forward(f, scaled, cfg)
        npt.assert_allclose(out.data, alpha * base.data, atol=1e-13)


def test_batch_items_are_independent(rng):
    a, b = rng.feature_map(1, 3, 4, 4), rng.feature_map(1, 3, 4, 4)
    wts = PamWeights.random(rng, 3)
    cfg = WindowConfig(3)
    ab, _ = pam_forward(FeatureMap(np.concatenate([a.data, b.data])), wts, cfg)
    ba, _ = pam_forward(FeatureMap(np.concatenate([b.data, a.data])), wts, cfg)
    npt.assert_array_equal(ab.data[0], ba.data[1])
    npt.assert_array_equal(ab.data[1], ba.data[0])


def test_threads_give_identical_results(rng):
    f = rng.feature_map(4, 3, 6, 6)
    wts = PamWeights.random(rng, 3, bias=True)
    cfg = WindowConfig(3)
    single, _ = pam_forward(f, wts, cfg, threads=1)
    multi, _ = pam_forward(f, wts, cfg, threads=3)
    assert single == multi

    g = rng.feature_map(4, 3, 6, 6)
    grads_1 = pam_backward(f, wts, cfg, g, threads=1)
    grads_3 = pam_backward(f, wts, cfg, g, threads=3)
    assert grads_1.d_input == grads_3.d_input
    for (_, a), (_, b) in zip(grads_1.items(), grads_3.items()):
        npt.assert_array_equal(a.w, b.w)
        npt.assert_array_equal(a.bias, b.bias)


def test_float32_input_stays_float32(rng):
    f = rng.feature_map(1, 2, 4, 4).astype(np.float32)
    out, _ = pam_forward(f, PamWeights.random(rng, 2), WindowConfig(3))
    assert out.dtype == np.float32


def test_rejects_bad_shapes(rng):
    with pytest.raises(ShapeMismatchError):
        pam_forward(rng.feature_map(1, 3, 4, 4), PamWeights.identity(4), WindowConfig(3))
    with pytest.raises(WindowConfigError):
        pam_forward(rng.feature_map(1, 2, 1, 4), PamWeights.identity(2), WindowConfig(5))
    with pytest.raises(ShapeMismatchError):
        pam_backward(rng.feature_map(1, 2, 4, 4), PamWeights.identity(2), WindowConfig(3),
                     rng.feature_map(1, 2, 4, 5))


def test_stack_applies_layers_in_order(rng):
    f = rng.feature_map(1, 2, 4, 4)
    cfg = WindowConfig(3)
    first, second = PamWeights.random(rng, 2), PamWeights.random(rng, 2)
    step, _ = pam_forward(f, first, cfg)
    expected, _ = pam_forward(step, second, cfg)
    assert pam_stack(f, [first, second], cfg) == expected
    assert pam_stack(f, [], cfg) == f


def test_backward_zero_upstream_gives_zero_gradients(rng):
    f = rng.feature_map(2, 3, 4, 4)
    grads = pam_backward(f, PamWeights.random(rng, 3, bias=True), WindowConfig(3), FeatureMap.zeros(2, 3, 4, 4))
    npt.assert_array_equal(grads.d_input.data, 0.0)
    for _, lw in grads.items():
        npt.assert_array_equal(lw.w, 0.0)
        npt.assert_array_equal(lw.bias, 0.0)


def test_backward_window_one_reduces_to_value_transform(rng):
    # with a single slot the attention is constant 1, so only omega sees the gradient
    f = rng.feature_map(2, 3, 3, 4)
    g = rng.feature_map(2, 3, 3, 4)
    wts = PamWeights.random(rng, 3, bias=True)
    grads = pam_backward(f, wts, WindowConfig(1), g)

    npt.assert_allclose(grads.d_input.data, np.einsum('oc,bohw->bchw', wts.omega.w, g.data), atol=1e-13)
    npt.assert_allclose(grads.d_omega.w, np.einsum('bohw,bchw->oc', g.data, f.data), atol=1e-12)
    npt.assert_allclose(grads.d_omega.bias, g.data.sum(axis=(0, 2, 3)), atol=1e-12)
    for lw in (grads.d_theta, grads.d_phi):
        npt.assert_array_equal(lw.w, 0.0)
        npt.assert_array_equal(lw.bias, 0.0)


def test_backward_identity_value_transform_passes_upstream():
    # out == omega(f) == f here, so the input gradient is the upstream map itself
    f = FeatureMap.full(0.5, 1, 2, 3, 3)
    g = FeatureMap(SeededRng(5).uniform((1, 2, 3, 3)))
    grads = pam_backward(f, PamWeights(LinearWeights.zeros(2, 2), LinearWeights.zeros(2, 2),
                                       LinearWeights.identity(2)), WindowConfig(1), g)
    npt.assert_allclose(grads.d_input.data, g.data, atol=1e-15)


@pytest.mark.parametrize("k", [1, 3, 5])
def test_forward_matches_unfolded_path(rng, k):
    f = rng.feature_map(2, 3, 6, 7)
    wts = PamWeights.random(rng, 3, bias=True)
    cfg = WindowConfig(k)
    out, att = pam_forward(f, wts, cfg)
    unfolded_out, unfolded_att, _, _, _ = _attend(f.data, wts, cfg)
    npt.assert_allclose(out.data, unfolded_out, atol=1e-12)
    npt.assert_allclose(att.values, unfolded_att, atol=1e-12)
