import math

import numpy as np
import numpy.testing as npt
import pytest

from data_models import (ClueMap, FeatureMap, LinearWeights, LstmWeights, MsrbWeights, PamWeights,
                         WindowConfig)
from errors import KernelError, ShapeMismatchError
from msrb.block import msrb_forward, msrb_stack, random_msrb_layers, super_resolve
from msrb.lstm import blstm_forward, lstm_sequence
from msrb.mixing import AXIS_HEIGHT, AXIS_WIDTH, axial_fc, madm, mlp_ffn, patm_fuse
from msrb.weights_io import dump_weights, load_weights, load_weights_file, save_weights_file


def pointwise(lw, x):
    return np.einsum('oc,bchw->bohw', lw.w, x) + lw.bias[None, :, None, None]


def along_height(m, x):
    return np.einsum('yY,bcYx->bcyx', m, x)


def along_width(m, x):
    return np.einsum('xX,bcyX->bcyx', m, x)


def wave_fusion(wts, x):
    z = pointwise(wts.channel_fc, x)
    theta = pointwise(wts.phase_fc, x)
    zc, zs = z * np.cos(theta), z * np.sin(theta)
    mixed = (along_height(wts.amp_t_h, zc) + along_height(wts.amp_i_h, zs)
             + along_width(wts.amp_t_w, zc) + along_width(wts.amp_i_w, zs))
    return pointwise(wts.fuse_fc, mixed)


def mixer_reference(wts, x):
    branches = along_height(wts.axial_h, x) + along_width(wts.axial_w, x) + pointwise(wts.channel_mix, x)
    return x + wave_fusion(wts, branches)


def feed_forward_reference(wts, x):
    out = np.empty_like(x)
    b, _, h, w = x.shape
    for i in range(b):
        for y in range(h):
            for col in range(w):
                pixel = x[i, :, y, col]
                hidden = wts.ffn_in.w @ pixel + wts.ffn_in.bias
                hidden = np.array([v * 0.5 * (1.0 + math.erf(v / math.sqrt(2.0))) for v in hidden])
                out[i, :, y, col] = pixel + wts.ffn_out.w @ hidden + wts.ffn_out.bias
    return out


def blstm_reference(x, fwd, bwd, proj):
    b, _, h, w = x.shape
    hidden = fwd.hidden_size
    out = np.empty((b, proj.c_out, h, w))
    for i in range(b):
        for y in range(h):
            forward, backward = np.zeros((w, hidden)), np.zeros((w, hidden))
            state, cell = np.zeros(hidden), np.zeros(hidden)
            for t in range(w):
                state, cell = naive_cell(x[i, :, y, t], state, cell, fwd)
                forward[t] = state
            state, cell = np.zeros(hidden), np.zeros(hidden)
            for t in range(w - 1, -1, -1):
                state, cell = naive_cell(x[i, :, y, t], state, cell, bwd)
                backward[t] = state
            for t in range(w):
                out[i, :, y, t] = proj.w @ (forward[t] + backward[t]) + proj.bias
    return out


def naive_cell(x, h, c, wts):
    hidden = wts.hidden_size
    gates = wts.w_ih @ x + wts.w_hh @ h + wts.bias
    sig = lambda v: 1.0 / (1.0 + np.exp(-v))  # noqa: E731
    i, f = sig(gates[:hidden]), sig(gates[hidden:2 * hidden])
    g, o = np.tanh(gates[2 * hidden:3 * hidden]), sig(gates[3 * hidden:])
    c_next = f * c + i * g
    return o * np.tanh(c_next), c_next


def test_axial_identity_and_mean(rng):
    f = rng.feature_map(2, 3, 4, 5)
    npt.assert_allclose(axial_fc(f, AXIS_HEIGHT, np.eye(4)).data, f.data, atol=1e-15)
    npt.assert_allclose(axial_fc(f, AXIS_WIDTH, np.eye(5)).data, f.data, atol=1e-15)
    col_mean = axial_fc(f, AXIS_HEIGHT, np.full((4, 4), 0.25)).data
    npt.assert_allclose(col_mean, np.broadcast_to(f.data.mean(axis=2, keepdims=True), f.shape), atol=1e-14)


def test_axial_matches_loops(rng):
    f = rng.feature_map(1, 2, 3, 4)
    m = rng.uniform((4, 4))
    out = axial_fc(f, AXIS_WIDTH, m).data
    for y in range(3):
        for x in range(4):
            expected = sum(m[x, j] * f.data[0, :, y, j] for j in range(4))
            npt.assert_allclose(out[0, :, y, x], expected, atol=1e-14)


def test_axial_errors(rng):
    f = rng.feature_map(1, 2, 3, 4)
    with pytest.raises(KernelError):
        axial_fc(f, 'channel', np.eye(3))
    with pytest.raises(ShapeMismatchError):
        axial_fc(f, AXIS_HEIGHT, np.eye(4))


def test_patm_matches_formula(rng):
    wts = MsrbWeights.random(rng, 3, 4, 5)
    f = rng.feature_map(2, 3, 4, 5)
    npt.assert_allclose(patm_fuse(f, wts).data, wave_fusion(wts, f.data), atol=1e-13)


def test_patm_zero_phase_drops_sine_branch(rng):
    wts = MsrbWeights.random(rng, 3, 4, 4).replace(phase_fc=LinearWeights.zeros(3, 3))
    f = rng.feature_map(1, 3, 4, 4)
    without_sine = wts.replace(amp_i_h=np.zeros((4, 4)), amp_i_w=np.zeros((4, 4)))
    npt.assert_allclose(patm_fuse(f, wts).data, patm_fuse(f, without_sine).data, atol=1e-15)


def test_patm_zero_amplitude_gives_fuse_bias(rng):
    wts = MsrbWeights.random(rng, 3, 4, 4).replace(channel_fc=LinearWeights.zeros(3, 3))
    out = patm_fuse(rng.feature_map(2, 3, 4, 4), wts).data
    npt.assert_allclose(out, np.broadcast_to(wts.fuse_fc.bias[None, :, None, None], out.shape), atol=1e-15)


def test_zero_weights_make_residual_layers_identity(rng):
    f = rng.feature_map(2, 3, 4, 6)
    wts = MsrbWeights.zeros(3, 4, 6)
    assert madm(f, wts) == f
    assert mlp_ffn(f, wts) == f


def test_madm_matches_branch_composition(rng):
    wts = MsrbWeights.random(rng, 4, 5, 6)
    f = rng.feature_map(2, 4, 5, 6)
    npt.assert_allclose(madm(f, wts).data, mixer_reference(wts, f.data), atol=1e-12)


def test_ffn_matches_per_pixel_mlp(rng):
    wts = MsrbWeights.random(rng, 3, 2, 4, ffn_hidden=5)
    f = rng.feature_map(2, 3, 2, 4)
    npt.assert_allclose(mlp_ffn(f, wts).data, feed_forward_reference(wts, f.data), atol=1e-13)


def test_mixing_rejects_wrong_dims(rng):
    wts = MsrbWeights.zeros(3, 4, 6)
    with pytest.raises(ShapeMismatchError):
        madm(rng.feature_map(1, 3, 6, 4), wts)
    with pytest.raises(ShapeMismatchError):
        mlp_ffn(rng.feature_map(1, 2, 4, 6), wts)


def test_blstm_zero_weights_give_projection_bias(rng):
    f = rng.feature_map(2, 3, 2, 5)
    proj = LinearWeights(np.zeros((3, 4)), [0.5, -1.0, 2.0])
    out = blstm_forward(f, LstmWeights.zeros(3, 4), LstmWeights.zeros(3, 4), proj).data
    npt.assert_array_equal(out, np.broadcast_to(np.array([0.5, -1.0, 2.0])[None, :, None, None], out.shape))


def test_blstm_single_step_is_one_cell_per_direction(rng):
    f = rng.feature_map(1, 3, 2, 1)
    fwd, bwd = LstmWeights.random(rng, 3, 4), LstmWeights.random(rng, 3, 4)
    proj = LinearWeights.random(rng, 3, 4, bias=True)
    out = blstm_forward(f, fwd, bwd, proj).data
    zero = np.zeros(4)
    for y in range(2):
        x = f.data[0, :, y, 0]
        summed = naive_cell(x, zero, zero, fwd)[0] + naive_cell(x, zero, zero, bwd)[0]
        npt.assert_allclose(out[0, :, y, 0], proj.w @ summed + proj.bias, atol=1e-13)


def test_lstm_sequence_matches_naive_unroll(rng):
    wts = LstmWeights.random(rng, 2, 3)
    seq = rng.uniform((2, 4, 2))
    for reverse in (False, True):
        out = lstm_sequence(seq, wts, reverse=reverse)
        for row in range(2):
            h, c = np.zeros(3), np.zeros(3)
            steps = range(3, -1, -1) if reverse else range(4)
            for t in steps:
                h, c = naive_cell(seq[row, t], h, c, wts)
                npt.assert_allclose(out[row, t], h, atol=1e-13)


def test_blstm_width_reversal_swaps_directions(rng):
    f = rng.feature_map(2, 3, 3, 6)
    fwd, bwd = LstmWeights.random(rng, 3, 4), LstmWeights.random(rng, 3, 4)
    proj = LinearWeights.random(rng, 3, 4, bias=True)
    out = blstm_forward(f, fwd, bwd, proj).data
    flipped = blstm_forward(FeatureMap(f.data[:, :, :, ::-1]), bwd, fwd, proj).data
    npt.assert_allclose(flipped[:, :, :, ::-1], out, atol=1e-12)


def test_blstm_threads_identical(rng):
    f = rng.feature_map(3, 2, 2, 4)
    fwd, bwd = LstmWeights.random(rng, 2, 3), LstmWeights.random(rng, 2, 3)
    proj = LinearWeights.random(rng, 2, 3)
    assert blstm_forward(f, fwd, bwd, proj, threads=1) == blstm_forward(f, fwd, bwd, proj, threads=3)


def test_msrb_keeps_shape(rng):
    f = rng.feature_map(1, 8, 4, 10)
    wts = MsrbWeights.random(rng, 8, 4, 10)
    assert msrb_forward(f, None, wts).shape == (1, 8, 4, 10)
    assert msrb_forward(f, ClueMap.zeros(1, 0, 4, 10), wts) == msrb_forward(f, None, wts)


def test_msrb_uses_clues(rng):
    f = rng.feature_map(2, 4, 3, 5)
    wts = MsrbWeights.random(rng, 4, 3, 5, clue_channels=2)
    clues = ClueMap(rng.uniform((2, 2, 3, 5)))
    with_clues = msrb_forward(f, clues, wts)
    assert with_clues.shape == f.shape
    assert not np.allclose(with_clues.data, msrb_forward(f, ClueMap.zeros(2, 2, 3, 5), wts).data)


def test_msrb_matches_stage_composition(rng):
    wts = MsrbWeights.random(rng, 3, 2, 4, clue_channels=2, lstm_hidden=5)
    f = rng.feature_map(2, 3, 2, 4)
    clues = rng.uniform((2, 2, 2, 4))
    features = feed_forward_reference(wts, mixer_reference(wts, f.data))
    joined = np.concatenate([features, clues], axis=1)
    expected = blstm_reference(joined, wts.lstm_fwd, wts.lstm_bwd, wts.proj)
    out = msrb_forward(f, ClueMap(clues), wts, threads=2).data
    npt.assert_allclose(out, expected, atol=1e-10)


def test_msrb_rejects_bad_clues(rng):
    f = rng.feature_map(1, 4, 3, 5)
    wts = MsrbWeights.random(rng, 4, 3, 5, clue_channels=2)
    with pytest.raises(ShapeMismatchError):
        msrb_forward(f, None, wts)
    with pytest.raises(ShapeMismatchError):
        msrb_forward(f, ClueMap.zeros(1, 2, 3, 4), wts)
    with pytest.raises(ShapeMismatchError):
        msrb_forward(f, ClueMap.zeros(2, 2, 3, 5), wts)


def test_msrb_stack(rng):
    f = rng.feature_map(1, 3, 2, 4)
    layers = random_msrb_layers(rng, 3, 2, 4, depth=2)
    expected = msrb_forward(msrb_forward(f, None, layers[0]), None, layers[1])
    assert msrb_stack(f, None, layers) == expected
    with pytest.raises(KernelError):
        random_msrb_layers(rng, 3, 2, 4, depth=0)


def test_super_resolve_shape(rng):
    f = rng.feature_map(1, 4, 4, 6)
    layers = random_msrb_layers(rng, 4, 4, 6, depth=1)
    lift = LinearWeights.random(rng, 16, 4, bias=True)
    out = super_resolve(f, None, layers, lift, PamWeights.random(rng, 4), 2, WindowConfig(3))
    assert out.shape == (1, 4, 8, 12)
    with pytest.raises(ShapeMismatchError):
        super_resolve(f, None, layers, lift, PamWeights.random(rng, 2), 2, WindowConfig(3))


def test_weights_survive_serialization(rng, tmp_path):
    wts = MsrbWeights.random(rng, 3, 2, 4, clue_channels=1)
    payload, manifest = dump_weights(wts)
    assert manifest.splitlines()[0] == "msrb 3 2 4 1"
    loaded = load_weights(payload, manifest)
    for name, tensor in wts.tensors().items():
        other = getattr(loaded, name)
        if isinstance(tensor, np.ndarray):
            npt.assert_array_equal(other, tensor)
        else:
            for attr in vars(tensor):
                npt.assert_array_equal(getattr(other, attr), getattr(tensor, attr))

    prefix = str(tmp_path / "block0")
    save_weights_file(wts, prefix)
    f = rng.feature_map(1, 3, 2, 4)
    clues = ClueMap(rng.uniform((1, 1, 2, 4)))
    assert msrb_forward(f, clues, load_weights_file(prefix)) == msrb_forward(f, clues, wts)


def test_weight_loading_errors(rng, tmp_path):
    payload, manifest = dump_weights(MsrbWeights.zeros(2, 2, 2))
    with pytest.raises(KernelError):
        load_weights(payload[:-8], manifest)
    with pytest.raises(KernelError):
        load_weights(payload, "mlp 2 2 2 0\n")
    with pytest.raises(KernelError):
        load_weights_file(str(tmp_path / "missing"))
