"""
Reports helper for Pixel Adapter Bench
Handles text formatting and export of verification reports
"""

from typing import List, Optional

from data_models import BenchRecord, VerifyReport
from helpers.excel import EXCEL_AVAILABLE, ExcelHelper
from helpers.logger import get_logger
from utils import ensure_parent_directory


class ReportsHelper:
    """Helper class for formatting and exporting reports"""

    @staticmethod
    def format_verify_report(report: VerifyReport) -> str:
        """
        Render a report as aligned text, one line per case
        Args:
            report: The report to render
        Returns:
            text ending with an overall PASS/FAIL line
        """
        lines = [report.title, '=' * len(report.title)]
        width = max([len(case.name) for case in report.cases] + [4])
        for case in report.cases:
            status = 'ok' if case.passed else 'FAIL'
            lines.append(f"{case.name:<{width}}  {case.shapes:<24}  max_abs_diff={case.max_abs_diff:.3e}  "
                         f"tol={case.tolerance:.1e}  {status}")
        if not report.cases:
            lines.append("(no cases)")
        failures = len(report.failures)
        verdict = 'PASS' if report.passed else f'FAIL ({failures} of {len(report.cases)} cases)'
        lines.append(f"overall: {verdict}")
        return '\n'.join(lines) + '\n'

    @staticmethod
    def write_text(text: str, filename: str):
        ensure_parent_directory(filename)
        with open(filename, 'w') as f:
            f.write(text)

    @staticmethod
    def export_xlsx(filename: str, report: Optional[VerifyReport] = None,
                    records: Optional[List[BenchRecord]] = None) -> bool:
        """
        Write a report or benchmark records to a spreadsheet
        Returns:
            False when openpyxl is not installed
        """
        if not EXCEL_AVAILABLE:
            get_logger().log_warning(f"openpyxl is not installed, skipping {filename}")
            return False
        helper = ExcelHelper()
        if report is not None:
            helper.export_verify_report(report, filename)
        else:
            helper.export_bench_records(records or [], filename)
        return True
