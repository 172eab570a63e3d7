from enum import Enum

from pydantic import BaseModel, Field, model_validator


class SolverMethod(str, Enum):
    """AVE 求解方法"""
    PICARD_CSCS = "picard_cscs"            # Picard 外迭代 + CSCS 內掃描
    PICARD_CSCS_RU = "picard_cscs_ru"      # 殘差更新形式的 Picard-CSCS
    CSCS_LIKE = "cscs_like"                # 非線性 CSCS-like 單步迭代
    CSCS_LIKE_RU = "cscs_like_ru"          # 殘差更新形式的 CSCS-like
    PICARD_HSS = "picard_hss"              # Picard-HSS 基準
    HSS_LIKE = "hss_like"                  # 非線性 HSS-like 基準
    GN_GMRES = "gn_gmres"                  # 廣義牛頓法 + GMRES(m)
    GN_TFQMR = "gn_tfqmr"                  # 廣義牛頓法 + TFQMR


class InnerKrylov(str, Enum):
    """廣義牛頓法內層 Krylov 方法"""
    GMRES = "gmres"
    TFQMR = "tfqmr"


CSCS_METHODS = frozenset(
    {
        SolverMethod.PICARD_CSCS,
        SolverMethod.PICARD_CSCS_RU,
        SolverMethod.CSCS_LIKE,
        SolverMethod.CSCS_LIKE_RU,
    }
)
HSS_METHODS = frozenset({SolverMethod.PICARD_HSS, SolverMethod.HSS_LIKE})
NEWTON_METHODS = frozenset({SolverMethod.GN_GMRES, SolverMethod.GN_TFQMR})


# 方法說明
METHOD_DESCRIPTIONS = {
    SolverMethod.PICARD_CSCS: "Picard 外迭代，每步以 CSCS 掃描近似求解 Ax = |x⁽ᵏ⁾| + b",
    SolverMethod.PICARD_CSCS_RU: "同 Picard-CSCS，內層改解殘差方程 As = r⁽ᵏ⁾ 再修正",
    SolverMethod.CSCS_LIKE: "每個半步都更新 |x| 的非線性 CSCS-like 單步迭代",
    SolverMethod.CSCS_LIKE_RU: "CSCS-like 的殘差更新形式，與原形式逐步等價",
    SolverMethod.PICARD_HSS: "Picard 外迭代 + HSS 內掃描（稠密 LU，基準方法）",
    SolverMethod.HSS_LIKE: "非線性 HSS-like 單步迭代（稠密 LU，基準方法）",
    SolverMethod.GN_GMRES: "廣義牛頓法，內層以重啟 GMRES(m) 求解 (A − D(x))x = b",
    SolverMethod.GN_TFQMR: "廣義牛頓法，內層以 TFQMR 求解 (A − D(x))x = b",
}


class SolverConfig(BaseModel):
    """求解器設定

    sigma 為 None 時由 AveSolverEngine 依方法自動選取最佳參數。
    """

    method: SolverMethod = SolverMethod.PICARD_CSCS
    sigma: float | None = Field(default=None, gt=0)

    # 外迭代
    outer_tol: float = Field(default=1e-7, gt=0, lt=1)
    outer_maxit: int = Field(default=200, ge=1)

    # 內迭代 (Picard)
    inner_tol: float = Field(default=0.01, gt=0, lt=1)  # η
    inner_maxit: int = Field(default=15, ge=1)  # l_k

    # 廣義牛頓法內層 Krylov
    gmres_restart: int = Field(default=5, ge=1)
    inner_krylov_tol: float = Field(default=0.01, gt=0, lt=1)
    krylov_maxit: int = Field(default=500, ge=1)

    @property
    def inner_krylov(self) -> InnerKrylov | None:
        if self.method is SolverMethod.GN_GMRES:
            return InnerKrylov.GMRES
        if self.method is SolverMethod.GN_TFQMR:
            return InnerKrylov.TFQMR
        return None

    @property
    def uses_sigma(self) -> bool:
        return self.method not in NEWTON_METHODS

    @model_validator(mode="after")
    def _check_caps(self):
        if self.gmres_restart > self.krylov_maxit:
            raise ValueError("gmres_restart 不可大於 krylov_maxit")
        return self
