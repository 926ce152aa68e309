"""
Benchmarkable kernel wrappers
Each wrapper runs one attention kernel and declares the intermediates it
materializes so memory can be accounted analytically.
"""

from typing import List

from attention.baselines import global_attention, halo_attention
from attention.flops import flops_estimate
from attention.pam import pam_forward
from attention.pga import build_pixel_graph, pga_reference
from data_models import FeatureMap, PamWeights, WindowConfig
from errors import KernelError, SizeCapError
from helpers.constants import (DEFAULT_HALO_BLOCK, DEFAULT_HALO_WIDTH, DEFAULT_PGA_MAX_PIXELS,
                               KERNEL_GLOBAL, KERNEL_HALO, KERNEL_KINDS, KERNEL_PAM, KERNEL_PGA)
from kernel_interface import IAttentionKernel, TensorDecl

INDEX_BYTES = 8
MASK_BYTES = 1


def _qkv(b: int, c: int, n: int) -> List[TensorDecl]:
    return [TensorDecl('q', b * n * c), TensorDecl('k', b * n * c), TensorDecl('v', b * n * c)]


class PamKernel(IAttentionKernel):
    """Sliding-window pixel adapter attention"""

    def __init__(self, cfg: WindowConfig, threads: int = 1):
        self.cfg = cfg
        self.threads = threads

    @property
    def name(self) -> str:
        return KERNEL_PAM

    @property
    def window(self) -> int:
        return self.cfg.k

    def run(self, f: FeatureMap, wts: PamWeights) -> FeatureMap:
        out, _ = pam_forward(f, wts, self.cfg, self.threads)
        return out

    def flops(self, b: int, c: int, h: int, w: int) -> int:
        return flops_estimate(KERNEL_PAM, b, c, h, w, self.cfg)

    def live_sets(self, b: int, c: int, h: int, w: int) -> List[List[TensorDecl]]:
        n, k2, p = h * w, self.cfg.k2, self.cfg.p
        padded = b * c * (h + 2 * p) * (w + 2 * p)
        keys = [TensorDecl('q', b * n * c), TensorDecl('phi_map', b * n * c), TensorDecl('padded_keys', padded)]
        score = [TensorDecl('q', b * n * c), TensorDecl('padded_keys', padded), TensorDecl('logits', b * n * k2)]
        aggregate = [TensorDecl('attention', b * n * k2), TensorDecl('padded_values', padded),
                     TensorDecl('slot_product', b * n * c)]
        return [keys, score, aggregate]


class PgaKernel(IAttentionKernel):
    """Dense-adjacency pixel graph attention"""

    def __init__(self, cfg: WindowConfig, max_pixels: int = DEFAULT_PGA_MAX_PIXELS):
        self.cfg = cfg
        self.max_pixels = max_pixels

    @property
    def name(self) -> str:
        return KERNEL_PGA

    @property
    def window(self) -> int:
        return self.cfg.k

    def check_size(self, h: int, w: int, allow_large: bool):
        if h * w >= self.max_pixels and not allow_large:
            raise SizeCapError(
                f"pga at {h}x{w} materializes {(h * w) ** 2} dense scores; pass --allow-large to run it")

    def run(self, f: FeatureMap, wts: PamWeights) -> FeatureMap:
        # graph construction is part of the measured cost
        graph = build_pixel_graph(f.h, f.w, self.cfg)
        return pga_reference(f, wts, graph)

    def flops(self, b: int, c: int, h: int, w: int) -> int:
        return flops_estimate(KERNEL_PGA, b, c, h, w, self.cfg)

    def live_sets(self, b: int, c: int, h: int, w: int) -> List[List[TensorDecl]]:
        n, k2 = h * w, self.cfg.k2
        graph = [TensorDecl('neighbors', n * k2, INDEX_BYTES), TensorDecl('adjacency', n * n, MASK_BYTES)]
        # one batch item is processed at a time
        score = graph + _qkv(1, c, n) + [TensorDecl('scores', n * n), TensorDecl('masked_scores', n * n)]
        reduce = graph + _qkv(1, c, n) + [TensorDecl('masked_scores', n * n), TensorDecl('row_weights', n)]
        return [score, reduce]


class HaloKernel(IAttentionKernel):
    """Blocked local attention with a halo border"""

    def __init__(self, block: int = DEFAULT_HALO_BLOCK, halo: int = DEFAULT_HALO_WIDTH, threads: int = 1):
        self.block = block
        self.halo = halo
        self.threads = threads

    @property
    def name(self) -> str:
        return KERNEL_HALO

    @property
    def window(self) -> int:
        return self.block + 2 * self.halo

    def run(self, f: FeatureMap, wts: PamWeights) -> FeatureMap:
        return halo_attention(f, wts, self.block, self.halo, self.threads)

    def flops(self, b: int, c: int, h: int, w: int) -> int:
        return flops_estimate(KERNEL_HALO, b, c, h, w, block=self.block, halo=self.halo)

    def live_sets(self, b: int, c: int, h: int, w: int) -> List[List[TensorDecl]]:
        n = h * w
        tiles = (h // self.block) * (w // self.block) if self.block else 0
        win2 = self.window ** 2
        attend = [TensorDecl('q', b * n * c),
                  TensorDecl('key_tiles', b * tiles * win2 * c),
                  TensorDecl('value_tiles', b * tiles * win2 * c),
                  TensorDecl('attention', b * n * win2)]
        return [_qkv(b, c, n), attend]


class GlobalKernel(IAttentionKernel):
    """Full attention over all pixels"""

    def __init__(self, threads: int = 1):
        self.threads = threads

    @property
    def name(self) -> str:
        return KERNEL_GLOBAL

    @property
    def window(self) -> int:
        return 0

    def run(self, f: FeatureMap, wts: PamWeights) -> FeatureMap:
        return global_attention(f, wts, self.threads)

    def flops(self, b: int, c: int, h: int, w: int) -> int:
        return flops_estimate(KERNEL_GLOBAL, b, c, h, w)

    def live_sets(self, b: int, c: int, h: int, w: int) -> List[List[TensorDecl]]:
        n = h * w
        return [_qkv(b, c, n) + [TensorDecl('scores', b * n * n), TensorDecl('attention', b * n * n)]]


def create_kernel(kind: str, cfg: WindowConfig, block: int = DEFAULT_HALO_BLOCK,
                  halo: int = DEFAULT_HALO_WIDTH, threads: int = 1,
                  pga_max_pixels: int = DEFAULT_PGA_MAX_PIXELS) -> IAttentionKernel:
    """Build the kernel wrapper for a CSV kernel id"""
    if kind == KERNEL_PAM:
        return PamKernel(cfg, threads)
    if kind == KERNEL_PGA:
        return PgaKernel(cfg, pga_max_pixels)
    if kind == KERNEL_HALO:
        return HaloKernel(block, halo, threads)
    if kind == KERNEL_GLOBAL:
        return GlobalKernel(threads)
    raise KernelError(f"unknown kernel '{kind}', expected one of {', '.join(KERNEL_KINDS)}")
