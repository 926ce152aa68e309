import tracemalloc

import numpy as np
import numpy.testing as npt
import pytest

from attention.pga import build_pixel_graph, pga_adjacency_list, pga_reference
from data_models import FeatureMap, PamWeights, WindowConfig
from errors import KernelError, ShapeMismatchError
from helpers.constants import ORACLE_TOLERANCE, PAD


def test_corner_node_neighbors():
    graph = build_pixel_graph(2, 2, WindowConfig(3))
    assert graph.n == 4
    npt.assert_array_equal(graph.neighbors[0], [PAD, PAD, PAD, PAD, 0, 1, PAD, 2, 3])
    npt.assert_array_equal(graph.real_neighbors(3), [0, 1, 2, 3])


def test_single_pixel_graph():
    graph = build_pixel_graph(1, 1, WindowConfig(1))
    npt.assert_array_equal(graph.neighbors, [[0]])
    assert graph.dense_mask.tolist() == [[True]]


def test_pad_counts_and_mask():
    graph = build_pixel_graph(4, 4, WindowConfig(3))
    assert graph.pad_count(5) == 0
    assert graph.pad_count(0) == 5
    assert graph.pad_count(1) == 3
    # per-axis window counts are 2, 3, 3, 2
    assert int(graph.dense_mask.sum()) == 100
    assert np.array_equal(graph.dense_mask, graph.dense_mask.T)
    assert graph.dense_mask[5, 0] and not graph.dense_mask[0, 15]


def test_every_node_lists_itself_at_the_center():
    graph = build_pixel_graph(3, 5, WindowConfig(5))
    npt.assert_array_equal(graph.neighbors[:, 12], np.arange(15))


def test_dense_and_list_forms_agree(rng):
    f = rng.feature_map(2, 3, 5, 4)
    wts = PamWeights.random(rng, 3, bias=True)
    graph = build_pixel_graph(5, 4, WindowConfig(3))
    dense = pga_reference(f, wts, graph)
    listed = pga_adjacency_list(f, wts, graph)
    assert np.max(np.abs(dense.data - listed.data)) <= ORACLE_TOLERANCE


def test_zero_input_gives_zero_output(rng):
    graph = build_pixel_graph(3, 3, WindowConfig(3))
    out = pga_reference(FeatureMap.zeros(1, 2, 3, 3), PamWeights.random(rng, 2), graph)
    npt.assert_array_equal(out.data, 0.0)


def test_rejects_mismatched_inputs(rng):
    graph = build_pixel_graph(4, 4, WindowConfig(3))
    with pytest.raises(ShapeMismatchError):
        pga_reference(rng.feature_map(1, 2, 5, 5), PamWeights.identity(2), graph)
    with pytest.raises(ShapeMismatchError):
        pga_adjacency_list(rng.feature_map(1, 2, 4, 4), PamWeights.identity(3), graph)
    with pytest.raises(KernelError):
        build_pixel_graph(0, 4, WindowConfig(3))


def _traced_peak(fn):
    tracemalloc.start()
    try:
        fn()
        return tracemalloc.get_traced_memory()[1]
    finally:
        tracemalloc.stop()


def test_dense_scores_do_not_grow_with_channels(rng):
    graph = build_pixel_graph(24, 24, WindowConfig(3))
    peaks = {}
    for c in (1, 16):
        f = rng.feature_map(1, c, 24, 24)
        wts = PamWeights.random(rng, c)
        peaks[c] = _traced_peak(lambda: pga_reference(f, wts, graph))
    n = graph.n
    # an [n, n, c] pair tensor would add n*n*15 doubles between the two runs
    assert peaks[16] - peaks[1] < n * n * 8
