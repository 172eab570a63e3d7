import numpy as np
from pydantic import BaseModel, Field, model_validator

from .solver_config import SolverMethod


class LinearSolveReport(BaseModel):
    """線性求解結果"""

    iterations: int = Field(ge=0)
    relative_residual: float
    converged: bool
    tol: float
    diverged: bool = False
    breakdown: bool = False
    residual_history: list[float] = []

    @model_validator(mode="after")
    def _converged_within_tol(self):
        if self.converged and not self.relative_residual <= self.tol:
            raise ValueError("converged 的報告殘差必須不大於 tol")
        return self


class IterationReport(BaseModel):
    """AVE 迭代結果，欄位對應 IT_out、IT_inn、IT"""

    method: SolverMethod
    n: int
    sigma: float | None = None
    outer_tol: float
    it_out: int = Field(ge=0)
    inner_iterations: list[int] = []
    residual_history: list[float] = Field(min_length=1)  # 含初始殘差
    converged: bool
    wall_seconds: float = 0.0
    inner_breakdowns: int = Field(default=0, ge=0)  # 內層 Krylov breakdown 且未達門檻的外迭代數

    @model_validator(mode="after")
    def _check_consistency(self):
        if self.converged and not self.residual_history[-1] <= self.outer_tol:
            raise ValueError("converged 的報告最後殘差必須不大於 outer_tol")
        if len(self.inner_iterations) != self.it_out:
            raise ValueError("inner_iterations 長度必須等於 it_out")
        return self

    @property
    def it_total(self) -> int:
        """總內迭代次數 IT"""
        return int(sum(self.inner_iterations))

    @property
    def it_inn_mean(self) -> float:
        """平均每個外迭代的內迭代次數 IT_inn"""
        if not self.inner_iterations:
            return 0.0
        return float(np.mean(self.inner_iterations))

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1]

    def has_monotone_tail(self, window: int = 5, band: float = 0.1) -> bool:
        """最後 window 筆殘差在 (1 + band) 容許帶內非遞增"""
        tail = self.residual_history[-window:]
        return all(
            later <= earlier * (1 + band) for earlier, later in zip(tail, tail[1:])
        )

    def to_summary_dict(self) -> dict:
        """轉換為摘要字典"""
        return {
            "method": self.method.value,
            "n": self.n,
            "sigma": self.sigma,
            "it_out": self.it_out,
            "it_inn_mean": round(self.it_inn_mean, 4),
            "it_total": self.it_total,
            "converged": self.converged,
            "final_residual": self.final_residual,
            "wall_seconds": round(self.wall_seconds, 6),
            "inner_breakdowns": self.inner_breakdowns,
        }
