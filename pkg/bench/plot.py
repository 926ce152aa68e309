"""
Scaling plot of benchmark CSV files
Two log-log panels, median time and peak bytes against pixel count, with
one polyline per kernel. Output SVG bytes depend only on the input records.
"""

from typing import Dict, List

import matplotlib
matplotlib.use("Agg")
from matplotlib import pyplot as plt

from data_models import BenchRecord
from helpers.constants import KERNEL_KINDS
from helpers.logger import get_logger
from utils import ensure_parent_directory

SVG_HASH_SALT = "pixel-adapter-bench"
MARKERS = {'pam': 'o', 'pga': 's', 'halo': '^', 'global': 'D'}


def _series(records: List[BenchRecord]) -> Dict[str, List[BenchRecord]]:
    by_kernel: Dict[str, List[BenchRecord]] = {}
    for record in records:
        by_kernel.setdefault(record.kernel, []).append(record)
    # known kernels first in their canonical order, then any others by name
    order = [k for k in KERNEL_KINDS if k in by_kernel] + sorted(k for k in by_kernel if k not in KERNEL_KINDS)
    return {kind: sorted(by_kernel[kind], key=lambda r: (r.n, r.c, r.b)) for kind in order}


def render_svg(records: List[BenchRecord], out_path: str):
    """Write the two-panel SVG for `records`; an empty list gives empty axes"""
    series = _series(records)
    with matplotlib.rc_context({'svg.hashsalt': SVG_HASH_SALT, 'svg.fonttype': 'path'}):
        fig, (ax_time, ax_mem) = plt.subplots(1, 2, figsize=(10, 4))
        for kind, rows in series.items():
            xs = [r.n for r in rows]
            marker = MARKERS.get(kind, 'x')
            ax_time.plot(xs, [r.wall_ns_median for r in rows], marker=marker, label=kind)
            ax_mem.plot(xs, [r.peak_bytes for r in rows], marker=marker, label=kind)

        for ax, ylabel, title in ((ax_time, "median wall time (ns)", "Time"),
                                  (ax_mem, "peak bytes", "Memory")):
            ax.set_xlabel("pixels (h*w)")
            ax.set_ylabel(ylabel)
            ax.set_title(title)
            if series:
                ax.set_xscale("log")
                ax.set_yscale("log")
                ax.legend()
            ax.grid(True, which="both", linestyle="--", alpha=0.4)

        fig.tight_layout()
        ensure_parent_directory(out_path)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    get_logger().log_info(f"Wrote {out_path} ({len(records)} records, {len(series)} kernels)")
