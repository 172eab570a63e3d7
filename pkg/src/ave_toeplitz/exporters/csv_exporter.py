"""CSV 匯出器

結果表與收斂歷史皆為 UTF-8、LF 換行、小數點為 '.' 的 CSV。
"""

import csv
import logging
import math
from collections.abc import Iterable
from pathlib import Path

from ave_toeplitz.exceptions import ExportError
from ave_toeplitz.models.experiment import ResultRow
from ave_toeplitz.models.report import IterationReport

logger = logging.getLogger(__name__)

RESULT_FIELDS = [
    "method",
    "n",
    "sigma",
    "it_out",
    "it_inn_mean",
    "it_total",
    "converged",
    "final_residual",
    "wall_seconds",
]
HISTORY_FIELDS = ["k", "relative_residual"]


def format_float(value: float | None, spec: str = ".6g") -> str:
    """None 輸出空字串，非有限值輸出 nan / inf"""
    if value is None:
        return ""
    if math.isnan(value):
        return "nan"
    return format(value, spec)


class CSVExporter:
    """CSV 匯出器"""

    @staticmethod
    def export_results(rows: Iterable[ResultRow], output_path: str | Path) -> Path:
        """匯出結果表

        Args:
            rows: 結果列
            output_path: 輸出檔案路徑

        Returns:
            實際寫入的路徑
        """
        records = [
            {
                "method": row.method.value,
                "n": row.n,
                "sigma": format_float(row.sigma),
                "it_out": row.it_out,
                "it_inn_mean": format_float(row.it_inn_mean, ".4f"),
                "it_total": row.it_total,
                "converged": row.status,
                "final_residual": format_float(row.final_residual),
                "wall_seconds": format_float(row.wall_seconds, ".6f"),
            }
            for row in rows
        ]
        return CSVExporter._write(output_path, RESULT_FIELDS, records)

    @staticmethod
    def export_history(report: IterationReport, output_path: str | Path) -> Path:
        """匯出收斂歷史，k = 0 為初始殘差"""
        records = [
            {"k": k, "relative_residual": format_float(value)}
            for k, value in enumerate(report.residual_history)
        ]
        return CSVExporter._write(output_path, HISTORY_FIELDS, records)

    @staticmethod
    def history_filename(report: IterationReport) -> str:
        return f"{report.method.value}_n{report.n}.csv"

    @staticmethod
    def _write(output_path: str | Path, fieldnames: list[str], records: list[dict]) -> Path:
        output_file = Path(output_path)
        try:
            output_file.parent.mkdir(parents=True, exist_ok=True)
            with output_file.open("w", newline="", encoding="utf-8") as csvfile:
                writer = csv.DictWriter(csvfile, fieldnames=fieldnames, lineterminator="\n")
                writer.writeheader()
                writer.writerows(records)
        except OSError as e:
            logger.error("CSV 匯出失敗: %s: %s", output_file, e)
            raise ExportError(f"無法寫入 {output_file}: {e}") from e

        logger.debug("已寫入 %d 筆資料到 %s", len(records), output_file)
        return output_file


# 便利函數
def emit_csv(rows: Iterable[ResultRow], path: str | Path) -> Path:
    return CSVExporter.export_results(rows, path)


def emit_history(report: IterationReport, path: str | Path) -> Path:
    return CSVExporter.export_history(report, path)
