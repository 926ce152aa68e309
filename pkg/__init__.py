"""
Pixel Adapter Bench Package
Sliding-window pixel adapter attention, its dense-graph oracle, the MLP-based
sequential residual block, HOG contour losses and a benchmark harness
"""

__version__ = "1.0.0"
__author__ = "Pixel Adapter Bench Team"
