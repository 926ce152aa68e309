#!/usr/bin/env python3
"""
Pixel Adapter Bench - command line entry point
Verification, gradient check, scaling benchmark, plotting and image demo
for the sliding-window pixel adapter attention
"""

import sys
import os
import argparse
from typing import List, Optional

# Add the current directory to the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config_manager import ConfigManager
from errors import KernelError
from helpers.constants import DEFAULT_SEED, DEFAULT_WINDOW, KERNEL_KINDS, PRECISIONS
from helpers.logger import log, log_error
from helpers.reports import ReportsHelper
from utils import get_config_path, parse_int_list, parse_name_list, setup_logging

__version__ = "1.0.0"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pixel-adapter-bench", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed of every random draw")
    parser.add_argument("--precision", choices=sorted(PRECISIONS), default=None,
                        help="float precision of the benchmark (verification always runs in f64)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for batch items")
    parser.add_argument("--config", default=None, help="INI file (default: config.ini next to main.py)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR or CRITICAL")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="oracle equivalence suite")
    verify.add_argument("--cases", type=int, default=None)
    verify.add_argument("--perturb", type=float, default=0.0,
                        help="offset added to the sliding-window value weights")
    verify.add_argument("--out", default=None, help="also write the report to this file")
    verify.add_argument("--xlsx", default=None, help="also export the report as a spreadsheet")

    grad = sub.add_parser("gradcheck", help="finite-difference check of the backward pass")
    grad.add_argument("--eps", type=float, default=None)
    grad.add_argument("--tol", type=float, default=None)
    grad.add_argument("--out", default=None, help="also write the report to this file")

    bench = sub.add_parser("bench", help="time and memory scaling benchmark")
    bench.add_argument("--sizes", default=None, help="square resolutions, e.g. 16,32,64,128")
    bench.add_argument("--channels", type=int, default=None)
    bench.add_argument("--k", type=int, default=None)
    bench.add_argument("--kernels", default=None, help=f"subset of {','.join(KERNEL_KINDS)}")
    bench.add_argument("--reps", type=int, default=None)
    bench.add_argument("--block", type=int, default=None, help="halo tile side")
    bench.add_argument("--halo", type=int, default=None, help="halo border width")
    bench.add_argument("--out", default="bench.csv")
    bench.add_argument("--allow-large", action="store_true", help="run pga above its size cap")
    bench.add_argument("--xlsx", default=None, help="also export the records as a spreadsheet")

    plot = sub.add_parser("plot", help="render a benchmark CSV as SVG")
    plot.add_argument("csv_path")
    plot.add_argument("svg_path")

    demo = sub.add_parser("demo", help="pixel shuffle vs pixel adapter on a P2 PGM image")
    demo.add_argument("pgm_path")
    demo.add_argument("out_prefix")
    demo.add_argument("--k", type=int, default=DEFAULT_WINDOW)
    return parser


def _emit_report(report, out: Optional[str], xlsx: Optional[str] = None) -> int:
    text = ReportsHelper.format_verify_report(report)
    sys.stdout.write(text)
    if out:
        ReportsHelper.write_text(text, out)
    if xlsx:
        ReportsHelper.export_xlsx(xlsx, report=report)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_verify(args, config: ConfigManager) -> int:
    from bench.verify import run_verify
    if args.cases is not None:
        config.verify.cases = args.cases
    report = run_verify(args.seed, config.verify, args.perturb, args.threads, config.hog)
    return _emit_report(report, args.out, args.xlsx)


def cmd_gradcheck(args, config: ConfigManager) -> int:
    from bench.gradcheck import run_gradcheck
    if args.eps is not None:
        config.gradcheck.eps = args.eps
    if args.tol is not None:
        config.gradcheck.tol = args.tol
    return _emit_report(run_gradcheck(args.seed, config.gradcheck), args.out)


def cmd_bench(args, config: ConfigManager) -> int:
    from bench.runner import run_bench, scaling_slopes, write_bench_csv
    bench = config.bench
    if args.sizes is not None:
        bench.sizes = parse_int_list(args.sizes, "sizes")
    if args.kernels is not None:
        bench.kernels = parse_name_list(args.kernels, KERNEL_KINDS, "kernel")
    for name in ("channels", "k", "reps", "block", "halo"):
        if getattr(args, name) is not None:
            setattr(bench, name, getattr(args, name))
    if args.precision is not None:
        bench.precision = args.precision

    records = run_bench(bench, args.seed, args.allow_large, args.threads)
    write_bench_csv(records, args.out)
    for kind, slope in scaling_slopes(records).items():
        sys.stdout.write(f"{kind}: log-log slope of time vs pixels = {slope:.2f}\n")
    if args.xlsx:
        ReportsHelper.export_xlsx(args.xlsx, records=records)
    log(f"Wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_plot(args, config: ConfigManager) -> int:
    from bench.plot import render_svg
    from bench.runner import read_bench_csv
    render_svg(read_bench_csv(args.csv_path), args.svg_path)
    return EXIT_OK


def cmd_demo(args, config: ConfigManager) -> int:
    from bench.demo import run_demo
    shuffle_path, pam_path, _ = run_demo(args.pgm_path, args.out_prefix, args.seed, args.k, args.threads,
                                         config.hog)
    sys.stdout.write(shuffle_path + "\n" + pam_path + "\n")
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "gradcheck": cmd_gradcheck,
    "bench": cmd_bench,
    "plot": cmd_plot,
    "demo": cmd_demo,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for Pixel Adapter Bench"""
    args = build_parser().parse_args(argv)
    config = ConfigManager()
    try:
        config.load_config(args.config or get_config_path())
    except (KernelError, ValueError) as e:
        setup_logging(args.log_level or "INFO")
        log_error(f"Invalid configuration: {e}")
        return EXIT_ERROR
    setup_logging(args.log_level or config.logging.level, config.logging.file or None)

    if args.threads < 1:
        log_error(f"--threads must be >= 1, got {args.threads}")
        return EXIT_ERROR
    try:
        return COMMANDS[args.command](args, config)
    except (KernelError, ValueError) as e:
        log_error(str(e))
        return EXIT_ERROR
    except OSError as e:
        log_error(f"{e.__class__.__name__}: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
