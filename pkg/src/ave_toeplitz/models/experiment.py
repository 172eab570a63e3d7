from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator

from ave_toeplitz.config.settings import settings

from .report import IterationReport
from .solver_config import NEWTON_METHODS, SolverMethod


class ProblemFamily(str, Enum):
    """實驗問題族"""
    EXAMPLE1 = "example1"  # 五對角複 Toeplitz 矩陣
    EXAMPLE2 = "example2"  # 分數階擴散離散矩陣
    CUSTOM = "custom"      # 由 CSV 檔案讀入


FAMILY_DESCRIPTIONS = {
    ProblemFamily.EXAMPLE1: "五對角複非 Hermitian Toeplitz 矩陣，參數 γ、c、d",
    ProblemFamily.EXAMPLE2: "分數階反應擴散方程的平移 Grünwald 離散，參數 α、d₊、d₋",
    ProblemFamily.CUSTOM: "自訂 Toeplitz 問題（CSV 檔案提供第一行、第一列與 b 或 x*）",
}


def _split_list(value: object) -> object:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class ExperimentSpec(BaseModel):
    """一次基準實驗的完整設定"""

    family: ProblemFamily = ProblemFamily.EXAMPLE1

    # 問題參數
    gamma: float = Field(default=10.0, gt=0)
    c: float = 2.0
    d: float = 3.0
    alpha: float = Field(default=1.5, gt=1, lt=2)
    d_plus: float = Field(default=0.6, ge=0)
    d_minus: float = Field(default=0.4, ge=0)
    problem_file: Path | None = None

    sizes: list[int] = Field(default_factory=lambda: [128], min_length=1)
    methods: list[SolverMethod] = Field(
        default_factory=lambda: [SolverMethod.PICARD_CSCS, SolverMethod.CSCS_LIKE],
        min_length=1,
    )

    # σ 模式：None 表示自動選取
    sigma: float | None = Field(default=None, gt=0)
    sigma_hss: float | None = Field(default=None, gt=0)

    # 求解器參數
    outer_tol: float = Field(default=1e-7, gt=0, lt=1)
    outer_maxit: int = Field(default=200, ge=1)
    inner_tol: float = Field(default=0.01, gt=0, lt=1)
    inner_maxit: int = Field(default=15, ge=1)
    gmres_restart: int = Field(default=5, ge=1)
    inner_krylov_tol: float = Field(default=0.01, gt=0, lt=1)
    krylov_maxit: int = Field(default=500, ge=1)

    # 輸出
    out: Path | None = None
    history_dir: Path | None = None

    workers: int = Field(default_factory=lambda: settings.workers, ge=1)
    expect_fail: list[SolverMethod] = Field(default_factory=list)

    @field_validator("sizes", "methods", "expect_fail", mode="before")
    @classmethod
    def _comma_separated(cls, value: object) -> object:
        return _split_list(value)

    @field_validator("sizes")
    @classmethod
    def _positive_sizes(cls, value: list[int]) -> list[int]:
        if any(n < 1 for n in value):
            raise ValueError("sizes 必須皆為正整數")
        return value

    @model_validator(mode="after")
    def _check_family(self):
        if self.family is ProblemFamily.CUSTOM and self.problem_file is None:
            raise ValueError("custom 問題族需要 problem_file")
        return self

    @property
    def uses_newton(self) -> bool:
        return any(method in NEWTON_METHODS for method in self.methods)


class ResultRow(BaseModel):
    """結果表的一列，converged 為 False 時輸出 Fail"""

    method: SolverMethod
    n: int
    sigma: float | None = None
    it_out: int = 0
    it_inn_mean: float = 0.0
    it_total: int = 0
    converged: bool = False
    final_residual: float = float("nan")
    wall_seconds: float = 0.0
    error: str | None = None

    @classmethod
    def from_report(cls, report: IterationReport) -> "ResultRow":
        return cls(
            method=report.method,
            n=report.n,
            sigma=report.sigma,
            it_out=report.it_out,
            it_inn_mean=report.it_inn_mean,
            it_total=report.it_total,
            converged=report.converged,
            final_residual=report.final_residual,
            wall_seconds=report.wall_seconds,
        )

    @classmethod
    def from_error(cls, method: SolverMethod, n: int, error: Exception) -> "ResultRow":
        return cls(method=method, n=n, error=f"{type(error).__name__}: {error}")

    @property
    def status(self) -> str:
        """True / Fail / Error"""
        if self.error is not None:
            return "Error"
        return "True" if self.converged else "Fail"
