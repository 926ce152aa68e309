"""
Kernel Interface Classes
Abstract definition every benchmarked attention kernel implements
"""

from abc import ABC, abstractmethod
from typing import List, Optional

from data_models import FeatureMap, PamWeights


class TensorDecl:
    """A materialized intermediate: element count plus optional fixed element size"""

    def __init__(self, name: str, elements: int, itemsize: Optional[int] = None):
        self.name = name
        self.elements = elements
        # None means "element size of the active precision"
        self.itemsize = itemsize

    def nbytes(self, itemsize: int) -> int:
        return self.elements * (self.itemsize if self.itemsize is not None else itemsize)

    def __repr__(self) -> str:
        return f"TensorDecl({self.name}, {self.elements})"


class IAttentionKernel(ABC):
    """Interface for attention kernels run by the benchmark"""

    @property
    @abstractmethod
    def name(self) -> str:
        """Kernel identifier as written to the CSV"""
        pass

    @property
    @abstractmethod
    def window(self) -> int:
        """Window side reported in the CSV k column"""
        pass

    @abstractmethod
    def run(self, f: FeatureMap, wts: PamWeights) -> FeatureMap:
        """Compute the kernel output"""
        pass

    @abstractmethod
    def flops(self, b: int, c: int, h: int, w: int) -> int:
        """Dominant multiply-accumulate count"""
        pass

    @abstractmethod
    def live_sets(self, b: int, c: int, h: int, w: int) -> List[List[TensorDecl]]:
        """
        Intermediates alive together at each stage of the kernel
        Returns:
            one list of declarations per stage; input and output are not included
        """
        pass

    def check_size(self, h: int, w: int, allow_large: bool):
        """Raise if this size must not run without an explicit override"""
        pass
