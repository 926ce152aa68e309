"""
Dominant multiply-accumulate counts for the attention kernels
Score computation and value aggregation each cost one MAC per
(query, key, channel) triple, hence the leading factor 2.
"""

from typing import Optional

from data_models import WindowConfig
from errors import KernelError
from helpers.constants import (DEFAULT_HALO_BLOCK, DEFAULT_HALO_WIDTH, KERNEL_GLOBAL, KERNEL_HALO,
                               KERNEL_KINDS, KERNEL_PAM, KERNEL_PGA)


def flops_estimate(kind: str, b: int, c: int, h: int, w: int, cfg: Optional[WindowConfig] = None,
                   block: int = DEFAULT_HALO_BLOCK, halo: int = DEFAULT_HALO_WIDTH) -> int:
    """
    Args:
        kind: one of pam, pga, halo, global
        cfg: window for pam (ignored by the others)
    Returns:
        pam: 2*b*n*k^2*c; halo: 2*b*n*(block+2*halo)^2*c;
        pga and global: 2*b*n^2*c, pga because the adjacency form scores every node pair
    """
    n = h * w
    if kind == KERNEL_PAM:
        if cfg is None:
            raise KernelError("pam FLOP estimate needs a window configuration")
        return 2 * b * n * cfg.k2 * c
    if kind == KERNEL_HALO:
        return 2 * b * n * (block + 2 * halo) ** 2 * c
    if kind in (KERNEL_PGA, KERNEL_GLOBAL):
        return 2 * b * n * n * c
    raise KernelError(f"unknown kernel '{kind}', expected one of {', '.join(KERNEL_KINDS)}")
