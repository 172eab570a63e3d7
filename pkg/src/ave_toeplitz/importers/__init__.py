"""匯入模組

讀取結果 CSV、自訂問題 CSV 與 TOML 實驗設定檔。
"""

from .config_loader import load_experiment_config
from .csv_importer import CSVImporter, load_custom_problem, read_results_csv

__all__ = ["CSVImporter", "load_custom_problem", "load_experiment_config", "read_results_csv"]
