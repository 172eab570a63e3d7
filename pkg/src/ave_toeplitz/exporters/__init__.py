"""匯出模組

提供結果表與收斂歷史的 CSV 匯出功能。
"""

from .csv_exporter import CSVExporter, emit_csv, emit_history

__all__ = ["CSVExporter", "emit_csv", "emit_history"]
