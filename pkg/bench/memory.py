"""
Analytic peak memory accounting
Each kernel declares the intermediates alive together at every stage; the
peak is input + output + the largest stage.
"""

from typing import List, Tuple

from kernel_interface import IAttentionKernel, TensorDecl


def stage_bytes(stage: List[TensorDecl], itemsize: int) -> int:
    return sum(decl.nbytes(itemsize) for decl in stage)


def track_bytes(kernel: IAttentionKernel, b: int, c: int, h: int, w: int, itemsize: int) -> int:
    """
    Peak materialized bytes of one kernel run
    Args:
        kernel: kernel whose live sets are evaluated
        b, c, h, w: input dims
        itemsize: bytes per float element of the active precision
    """
    io_bytes = 2 * b * c * h * w * itemsize
    if b * c * h * w == 0:
        return io_bytes
    stages = kernel.live_sets(b, c, h, w)
    return io_bytes + max((stage_bytes(stage, itemsize) for stage in stages), default=0)


def peak_breakdown(kernel: IAttentionKernel, b: int, c: int, h: int, w: int,
                   itemsize: int) -> List[Tuple[str, int]]:
    """(tensor name, bytes) of the largest stage, for debug logging"""
    stages = kernel.live_sets(b, c, h, w)
    if not stages:
        return []
    largest = max(stages, key=lambda stage: stage_bytes(stage, itemsize))
    return [(decl.name, decl.nbytes(itemsize)) for decl in largest]
