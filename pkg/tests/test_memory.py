import numpy as np
import pytest

from attention.kernels import GlobalKernel, HaloKernel, PamKernel, PgaKernel, create_kernel
from bench.memory import peak_breakdown, track_bytes
from data_models import PamWeights, WindowConfig
from errors import KernelError, SizeCapError


def test_pam_peak_formula():
    b, c, h, w, k, itemsize = 1, 4, 8, 8, 3, 8
    n, padded = h * w, b * c * (h + 2) * (w + 2)
    io = 2 * b * c * n * itemsize
    keys = 2 * b * n * c + padded
    score = b * n * c + padded + b * n * k * k
    assert track_bytes(PamKernel(WindowConfig(k)), b, c, h, w, itemsize) == io + max(keys, score) * itemsize


def test_pam_never_holds_window_copies():
    cfg = WindowConfig(5)
    b, c, h, w = 1, 8, 16, 16
    largest = max(decl.elements for stage in PamKernel(cfg).live_sets(b, c, h, w) for decl in stage)
    assert largest < b * c * h * w * cfg.k2


def test_global_peak_holds_square_scores():
    b, c, h, w = 2, 3, 4, 4
    n = h * w
    expected = 2 * b * c * n * 4 + (3 * b * n * c + 2 * b * n * n) * 4
    assert track_bytes(GlobalKernel(), b, c, h, w, 4) == expected


def test_zero_size_counts_only_io():
    assert track_bytes(PamKernel(WindowConfig(3)), 0, 4, 8, 8, 8) == 0
    assert track_bytes(GlobalKernel(), 1, 0, 8, 8, 4) == 0


@pytest.mark.parametrize("kind", ['pam', 'pga', 'halo', 'global'])
def test_peak_grows_with_size(kind):
    kernel = create_kernel(kind, WindowConfig(3), block=8, halo=2)
    peaks = [track_bytes(kernel, 1, 8, side, side, 4) for side in (16, 32, 64)]
    assert peaks[0] < peaks[1] < peaks[2]


def test_graph_attention_needs_far_more_memory():
    cfg = WindowConfig(3)
    pga = track_bytes(PgaKernel(cfg), 1, 16, 64, 64, 4)
    pam = track_bytes(PamKernel(cfg), 1, 16, 64, 64, 4)
    assert pga / pam >= 100


def test_peak_breakdown_names_largest_stage():
    names = [name for name, _ in peak_breakdown(PgaKernel(WindowConfig(3)), 1, 4, 8, 8, 8)]
    assert 'scores' in names and 'masked_scores' in names
    sizes = dict(peak_breakdown(PamKernel(WindowConfig(3)), 1, 16, 8, 8, 8))
    assert sizes['padded_keys'] == 16 * 10 * 10 * 8


def test_graph_attention_peak_is_linear_in_channels():
    cfg, n, itemsize = WindowConfig(3), 32 * 32, 4
    narrow = track_bytes(PgaKernel(cfg), 1, 1, 32, 32, itemsize)
    wide = track_bytes(PgaKernel(cfg), 1, 16, 32, 32, itemsize)
    # input, output, q, k and v are the only per-channel tensors
    assert wide - narrow == 5 * n * 15 * itemsize


def test_kernel_wrappers_run(rng):
    f = rng.feature_map(1, 2, 8, 8)
    wts = PamWeights.random(rng, 2)
    cfg = WindowConfig(3)
    pam_out = create_kernel('pam', cfg).run(f, wts)
    pga_out = create_kernel('pga', cfg).run(f, wts)
    assert np.max(np.abs(pam_out.data - pga_out.data)) <= 1e-9
    assert create_kernel('halo', cfg, block=4, halo=1).run(f, wts).shape == f.shape
    assert create_kernel('global', cfg).run(f, wts).shape == f.shape
    assert HaloKernel(block=4, halo=1).window == 6


def test_pga_size_cap():
    kernel = PgaKernel(WindowConfig(3), max_pixels=64)
    kernel.check_size(4, 4, allow_large=False)
    with pytest.raises(SizeCapError):
        kernel.check_size(8, 8, allow_large=False)
    kernel.check_size(8, 8, allow_large=True)


def test_unknown_kernel():
    with pytest.raises(KernelError):
        create_kernel('conv', WindowConfig(3))
