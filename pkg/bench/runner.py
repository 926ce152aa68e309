"""
Time and memory scaling benchmark
For every (kernel, resolution): one warm-up run, then `reps` timed runs;
the median wall time is reported together with the analytic peak bytes and
the FLOP estimate.
"""

import csv
import time
from typing import Dict, List, Optional

import numpy as np

from attention.kernels import create_kernel
from bench.memory import peak_breakdown, track_bytes
from config_manager import BenchConfig
from data_models import BenchRecord, PamWeights, SeededRng, WindowConfig
from errors import CsvFormatError, KernelError, ShapeMismatchError, SizeCapError
from helpers.constants import BENCH_CSV_FIELDS, BENCH_CSV_HEADER, KERNEL_HALO, MIN_REPS, PRECISIONS
from helpers.logger import get_logger
from utils import ensure_parent_directory, format_duration_ns, format_file_size


def time_kernel(run, reps: int) -> int:
    """Median of `reps` timed calls after one untimed warm-up, in nanoseconds"""
    run()
    samples = []
    for _ in range(reps):
        start = time.perf_counter_ns()
        run()
        samples.append(time.perf_counter_ns() - start)
    return max(1, int(np.median(samples)))


def run_bench(config: BenchConfig, seed: int, allow_large: bool = False, threads: int = 1) -> List[BenchRecord]:
    """
    Measure every configured kernel at every configured square size
    Sizes a kernel cannot run at (pga above its cap without allow_large,
    halo at sizes not divisible by the tile) are skipped with a warning.
    """
    if config.reps < MIN_REPS:
        raise KernelError(f"reps must be >= {MIN_REPS}, got {config.reps}")
    if config.channels < 1:
        raise KernelError(f"channels must be >= 1, got {config.channels}")
    logger = get_logger()
    dtype = np.dtype(PRECISIONS[config.precision])
    cfg = WindowConfig(config.k)
    records = []

    for size in config.sizes:
        rng = SeededRng(seed + size)
        f = rng.feature_map(1, config.channels, size, size).astype(dtype)
        wts = PamWeights.random(rng, config.channels).astype(dtype)
        for kind in config.kernels:
            kernel = create_kernel(kind, cfg, config.block, config.halo, threads, config.pga_max_pixels)
            try:
                kernel.check_size(size, size, allow_large)
                if kind == KERNEL_HALO and size % config.block:
                    raise ShapeMismatchError(f"{size} is not a multiple of the halo block {config.block}")
                cfg.check_fits(size, size)
            except (SizeCapError, ShapeMismatchError) as e:
                logger.log_warning(f"Skipping {kind} at {size}x{size}: {e}")
                continue

            wall_ns = time_kernel(lambda: kernel.run(f, wts), config.reps)
            peak = track_bytes(kernel, 1, config.channels, size, size, dtype.itemsize)
            record = BenchRecord(kind, 1, config.channels, size, size, kernel.window, config.reps,
                                 wall_ns, peak, kernel.flops(1, config.channels, size, size))
            records.append(record)
            logger.log_info(f"{kind} {size}x{size}: {format_duration_ns(wall_ns)}, "
                            f"peak {format_file_size(peak)}")
            logger.log_debug(f"{kind} largest stage: {peak_breakdown(kernel, 1, config.channels, size, size, dtype.itemsize)}")
    return records


def scaling_slopes(records: List[BenchRecord]) -> Dict[str, float]:
    """Per-kernel slope of log(median time) against log(n); kernels with fewer than two sizes are omitted"""
    by_kernel: Dict[str, List[BenchRecord]] = {}
    for record in records:
        by_kernel.setdefault(record.kernel, []).append(record)
    slopes = {}
    for kind, rows in by_kernel.items():
        ns = sorted({r.n for r in rows})
        if len(ns) < 2:
            continue
        x = np.log([r.n for r in rows])
        y = np.log([r.wall_ns_median for r in rows])
        slopes[kind] = float(np.polyfit(x, y, 1)[0])
    return slopes


def write_bench_csv(records: List[BenchRecord], path: str):
    ensure_parent_directory(path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(BENCH_CSV_FIELDS)
        for record in records:
            writer.writerow(record.to_row())


def read_bench_csv(path: str) -> List[BenchRecord]:
    """Parse a benchmark CSV; the header must match exactly"""
    records = []
    with open(path, 'r', newline='') as f:
        reader = csv.reader(f)
        header: Optional[List[str]] = next(reader, None)
        if header is None or ','.join(h.strip() for h in header) != BENCH_CSV_HEADER:
            raise CsvFormatError(f"header must be '{BENCH_CSV_HEADER}'", 1)
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            records.append(BenchRecord.from_row(row, reader.line_num))
    return records
