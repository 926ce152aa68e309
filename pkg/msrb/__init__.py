"""
MLP-based sequential residual block: axial mixing, wave fusion, feed-forward
MLP and the width-axis BLSTM
"""

from msrb.mixing import axial_fc, madm, mlp_ffn, patm_fuse
from msrb.lstm import blstm_forward
from msrb.block import msrb_forward, msrb_stack, random_msrb_layers, super_resolve
from msrb.weights_io import dump_weights, load_weights

__all__ = ['axial_fc', 'patm_fuse', 'madm', 'mlp_ffn', 'blstm_forward', 'msrb_forward', 'msrb_stack',
           'random_msrb_layers', 'super_resolve', 'dump_weights', 'load_weights']
