import csv
import logging
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError, field_validator

from ave_toeplitz.algorithms.toeplitz_core import toeplitz_new
from ave_toeplitz.exceptions import AveToeplitzError, SpecError
from ave_toeplitz.models.experiment import ResultRow
from ave_toeplitz.models.problem import AveProblem
from ave_toeplitz.models.solver_config import SolverMethod
from ave_toeplitz.problems.examples import rhs_from_solution

logger = logging.getLogger(__name__)

_STATUS_VALUES = {"True", "Fail", "Error"}


class ResultCSVRow(BaseModel):
    """結果 CSV 資料列模型"""

    method: SolverMethod
    n: int
    sigma: float | None = None
    it_out: int
    it_inn_mean: float
    it_total: int
    converged: str
    final_residual: float
    wall_seconds: float

    @field_validator("sigma", mode="before")
    @classmethod
    def _empty_sigma(cls, value: object) -> object:
        return None if value in ("", None) else value

    @field_validator("converged")
    @classmethod
    def _known_status(cls, value: str) -> str:
        if value not in _STATUS_VALUES:
            raise ValueError(f"converged 欄位必須是 True / Fail / Error，實際為 {value}")
        return value

    def to_result_row(self) -> ResultRow:
        return ResultRow(
            method=self.method,
            n=self.n,
            sigma=self.sigma,
            it_out=self.it_out,
            it_inn_mean=self.it_inn_mean,
            it_total=self.it_total,
            converged=self.converged == "True",
            final_residual=self.final_residual,
            wall_seconds=self.wall_seconds,
            error="匯入的錯誤列" if self.converged == "Error" else None,
        )


class CSVImporter:
    """CSV 匯入器"""

    @staticmethod
    def read_results_csv(file_path: str | Path) -> list[ResultRow]:
        """讀取 emit_csv 產生的結果表"""
        file_path = Path(file_path)
        if not file_path.exists():
            raise FileNotFoundError(f"CSV 檔案不存在: {file_path}")

        rows = []
        with file_path.open("r", encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            for row_num, row in enumerate(reader, start=2):  # 第 1 行是標題
                try:
                    rows.append(ResultCSVRow(**row).to_result_row())
                except ValidationError as e:
                    raise SpecError(f"解析 CSV 第 {row_num} 行時發生錯誤: {e}") from e
        return rows

    @staticmethod
    def load_custom_problem(file_path: str | Path) -> AveProblem:
        """讀取自訂問題

        必要欄位 first_col_re, first_col_im, first_row_re, first_row_im；
        另需 b_re, b_im 或 x_re, x_im 其中一組（兩者皆有時以 b 為右端項、x 為精確解）。
        """
        file_path = Path(file_path)
        if not file_path.exists():
            raise SpecError(f"問題檔案不存在: {file_path}")

        try:
            frame = pd.read_csv(file_path)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise SpecError(f"無法讀取問題檔案 {file_path}: {e}") from e

        required = ["first_col_re", "first_col_im", "first_row_re", "first_row_im"]
        missing = [name for name in required if name not in frame.columns]
        if missing:
            raise SpecError(f"問題檔案缺少欄位: {', '.join(missing)}")
        if frame[required].isna().to_numpy().any():
            raise SpecError("問題檔案的 Toeplitz 欄位含有空值")

        def complex_column(prefix: str) -> np.ndarray | None:
            re_name, im_name = f"{prefix}_re", f"{prefix}_im"
            if re_name not in frame.columns or im_name not in frame.columns:
                return None
            return frame[re_name].to_numpy(float) + 1j * frame[im_name].to_numpy(float)

        b = complex_column("b")
        x = complex_column("x")
        if b is None and x is None:
            raise SpecError("問題檔案需要 b_re/b_im 或 x_re/x_im")

        try:
            matrix = toeplitz_new(complex_column("first_col"), complex_column("first_row"))
            if b is None:
                b = rhs_from_solution(matrix, x)
            problem = AveProblem(matrix=matrix, rhs=b, exact_solution=x, label=file_path.stem)
        except (AveToeplitzError, ValidationError) as e:
            raise SpecError(f"問題檔案內容不合法: {e}") from e

        logger.info("讀入自訂問題 %s (n=%d)", file_path.name, problem.n)
        return problem


# 便利函數
def read_results_csv(file_path: str | Path) -> list[ResultRow]:
    return CSVImporter.read_results_csv(file_path)


def load_custom_problem(file_path: str | Path) -> AveProblem:
    return CSVImporter.load_custom_problem(file_path)
