"""
Excel helper for Pixel Adapter Bench
Spreadsheet copies of benchmark tables and verification reports. openpyxl is
optional; callers check EXCEL_AVAILABLE first.
"""

from typing import Any, Dict, Iterable, Sequence

from data_models import BenchRecord, VerifyReport
from helpers.constants import BENCH_CSV_FIELDS
from utils import ensure_parent_directory

try:
    import openpyxl
    from openpyxl.styles import Font, PatternFill
    from openpyxl.utils import get_column_letter
    EXCEL_AVAILABLE = True
except ImportError:
    EXCEL_AVAILABLE = False

VERIFY_HEADERS = ("Case", "Shapes", "Max Abs Diff", "Tolerance", "Passed")

# column -> number format
BENCH_FORMATS: Dict[str, str] = {
    'wall_ns_median': '#,##0',
    'peak_bytes': '#,##0',
    'flops_est': '#,##0',
}
VERIFY_FORMATS: Dict[str, str] = {
    'Max Abs Diff': '0.000E+00',
    'Tolerance': '0.0E+00',
}

HEADER_FILL = "CCCCCC"
FAIL_FILL = "F4CCCC"
MAX_COLUMN_WIDTH = 40


class ExcelHelper:
    """Builds one worksheet per export and saves it"""

    def __init__(self):
        if not EXCEL_AVAILABLE:
            raise ImportError("openpyxl is required for spreadsheet export. Install with: pip install openpyxl")
        self.workbook = openpyxl.Workbook()
        self.worksheet = self.workbook.active
        self.row = 1

    def _header(self, headers: Sequence[str]):
        for col, header in enumerate(headers, 1):
            cell = self.worksheet.cell(row=self.row, column=col, value=header)
            cell.font = Font(bold=True)
            cell.fill = PatternFill(start_color=HEADER_FILL, end_color=HEADER_FILL, fill_type="solid")
        self.worksheet.freeze_panes = self.worksheet.cell(row=self.row + 1, column=1)
        self.row += 1

    def _rows(self, headers: Sequence[str], rows: Iterable[Sequence[Any]], formats: Dict[str, str],
              failed=lambda row: False):
        for values in rows:
            highlight = failed(values)
            for col, (header, value) in enumerate(zip(headers, values), 1):
                cell = self.worksheet.cell(row=self.row, column=col, value=value)
                if header in formats:
                    cell.number_format = formats[header]
                if highlight:
                    cell.fill = PatternFill(start_color=FAIL_FILL, end_color=FAIL_FILL, fill_type="solid")
            self.row += 1

    def _fit_columns(self):
        for column in self.worksheet.columns:
            longest = max((len(str(cell.value)) for cell in column if cell.value is not None), default=0)
            letter = get_column_letter(column[0].column)
            self.worksheet.column_dimensions[letter].width = min(longest + 2, MAX_COLUMN_WIDTH)

    def _save(self, filename: str):
        self._fit_columns()
        ensure_parent_directory(filename)
        self.workbook.save(filename)

    def export_bench_records(self, records: Sequence[BenchRecord], filename: str):
        """Header row in CSV column order, then one row per record"""
        self.worksheet.title = "Bench"
        self._header(BENCH_CSV_FIELDS)
        rows = ([getattr(record, field) for field in BENCH_CSV_FIELDS] for record in records)
        self._rows(BENCH_CSV_FIELDS, rows, BENCH_FORMATS)
        self._save(filename)

    def export_verify_report(self, report: VerifyReport, filename: str):
        """
        Title in A1, case table from row 3, overall verdict one row below
        the last case. Failing cases are shaded.
        """
        self.worksheet.title = "Verify"
        self.worksheet.cell(row=1, column=1, value=report.title).font = Font(bold=True)
        self.row = 3
        self._header(VERIFY_HEADERS)
        rows = [(case.name, case.shapes, case.max_abs_diff, case.tolerance, "yes" if case.passed else "no")
                for case in report.cases]
        self._rows(VERIFY_HEADERS, rows, VERIFY_FORMATS, failed=lambda row: row[-1] == "no")
        self.row += 1
        verdict = self.worksheet.cell(row=self.row, column=len(VERIFY_HEADERS),
                                      value="PASS" if report.passed else "FAIL")
        self.worksheet.cell(row=self.row, column=1, value="overall").font = Font(bold=True)
        verdict.font = Font(bold=True)
        self._save(filename)
