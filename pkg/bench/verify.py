"""
Oracle equivalence suite
Seeded random cases comparing the sliding-window kernel against the dense
graph formulation and its neighbor-list variant, plus attention row sums,
a halo/global degenerate tile case and a HOG straight-line case.
"""

from typing import Optional

import numpy as np

from attention.baselines import global_attention, halo_attention
from attention.pam import pam_forward
from attention.pga import build_pixel_graph, pga_adjacency_list, pga_reference
from bench.oracles import checkerboard, hog_straight_line
from config_manager import HogConfig, VerifyConfig
from data_models import FeatureMap, HogParams, LinearWeights, PamWeights, SeededRng, VerifyReport, WindowConfig
from errors import KernelError
from helpers.constants import HOG_ORACLE_TOLERANCE
from helpers.logger import get_logger
from losses.hog import hog

CASE_BATCHES = [1, 2]
CASE_CHANNELS = [1, 4, 8]
CASE_WINDOWS = [1, 3, 5]
CASE_MIN_SIDE = 4
CASE_MAX_SIDE = 12
DEGENERATE_SIDE = 8
DEGENERATE_CHANNELS = 4


def _max_diff(a: FeatureMap, b: FeatureMap) -> float:
    return float(np.max(np.abs(a.data - b.data))) if a.data.size else 0.0


def perturbed(wts: PamWeights, eps: float) -> PamWeights:
    """Copy with eps added to every value-transform weight"""
    omega = LinearWeights(wts.omega.w + eps, wts.omega.bias)
    return PamWeights(wts.theta, wts.phi, omega)


def equivalence_cases(report: VerifyReport, seed: int, cases: int, cfg: VerifyConfig,
                      perturb: float = 0.0, threads: int = 1):
    rng = SeededRng(seed)
    logger = get_logger()
    for index in range(cases):
        b = rng.choice(CASE_BATCHES)
        c = rng.choice(CASE_CHANNELS)
        h, w = rng.integers(CASE_MIN_SIDE, CASE_MAX_SIDE, 2)
        k = rng.choice(CASE_WINDOWS)
        window = WindowConfig(k)
        f = rng.feature_map(b, c, h, w)
        # one case exercises the bias terms
        wts = PamWeights.random(rng, c, bias=(index == 0))
        shapes = f"[{b},{c},{h},{w}] k={k}"
        logger.log_debug(f"verify case {index + 1}: {shapes}")

        pam_wts = perturbed(wts, perturb) if perturb else wts
        out, relation = pam_forward(f, pam_wts, window, threads)
        graph = build_pixel_graph(h, w, window)
        reference = pga_reference(f, wts, graph)
        listed = pga_adjacency_list(f, wts, graph)

        name = f"case{index + 1:02d}"
        report.add_case(f"{name}.pam_vs_pga", shapes, _max_diff(out, reference), cfg.tolerance)
        report.add_case(f"{name}.pga_vs_list", shapes, _max_diff(reference, listed), cfg.tolerance)
        report.add_case(f"{name}.row_sums", shapes,
                        float(np.max(np.abs(relation.row_sums() - 1.0))), cfg.softmax_tolerance)


def halo_degenerate_case(report: VerifyReport, seed: int, cfg: VerifyConfig, threads: int = 1):
    """A single tile covering the whole image with no halo is global attention"""
    rng = SeededRng(seed ^ 0x5A5A)
    side, c = DEGENERATE_SIDE, DEGENERATE_CHANNELS
    f = rng.feature_map(1, c, side, side)
    wts = PamWeights.random(rng, c)
    diff = _max_diff(halo_attention(f, wts, side, 0, threads), global_attention(f, wts, threads))
    report.add_case("halo_vs_global", f"[1,{c},{side},{side}] block={side} halo=0", diff, cfg.tolerance)


def hog_oracle_case(report: VerifyReport, params: HogParams):
    """Checkerboard of two by two cells, squares half a cell wide"""
    cell = params.cell_size
    plane = checkerboard(2 * cell, max(1, cell // 2))
    library = hog(FeatureMap(plane[None, None]), params).values
    reference = np.array(hog_straight_line(plane, params))
    diff = float(np.max(np.abs(library - reference))) if library.size == reference.size else float('inf')
    report.add_case("hog_vs_straight_line",
                    f"[1,1,{2 * cell},{2 * cell}] cell={cell} bins={params.n_bins} {params.binning}",
                    diff, HOG_ORACLE_TOLERANCE)


def run_verify(seed: int, cfg: VerifyConfig, perturb: float = 0.0, threads: int = 1,
               hog_cfg: Optional[HogConfig] = None) -> VerifyReport:
    """
    Run the whole suite
    Args:
        seed: base seed of the random cases
        cfg: case count and tolerances; zero cases gives an empty, passing report
        perturb: weight offset applied to the sliding-window side only
        hog_cfg: parameters of the HOG case, defaults when omitted
    """
    if cfg.cases < 0:
        raise KernelError(f"cases must be >= 0, got {cfg.cases}")
    hog_cfg = hog_cfg or HogConfig()
    report = VerifyReport(f"verify seed={seed} cases={cfg.cases}")
    if cfg.cases == 0:
        return report
    equivalence_cases(report, seed, cfg.cases, cfg, perturb, threads)
    halo_degenerate_case(report, seed, cfg, threads)
    hog_oracle_case(report, hog_cfg.params)
    get_logger().log_info(f"verify: {len(report.cases)} checks, {len(report.failures)} failed")
    return report
