"""
Attention kernels: the sliding-window pixel adapter, its dense-graph oracle
and the blocked/global baselines
"""

from attention.pam import pam_backward, pam_forward, pam_stack
from attention.pga import build_pixel_graph, pga_adjacency_list, pga_reference
from attention.baselines import global_attention, halo_attention
from attention.flops import flops_estimate

__all__ = ['pam_forward', 'pam_backward', 'pam_stack', 'build_pixel_graph', 'pga_reference',
           'pga_adjacency_list', 'halo_attention', 'global_attention', 'flops_estimate']
