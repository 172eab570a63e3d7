from pydantic import model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="AVE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # 稠密運算上限（materialize_dense、HSS、診斷）
    dense_cap: int = 4096

    # 數值門檻
    near_singular_tol: float = 1e-14  # |σ + λ| 下限
    corner_tol: float = 1e-14  # first_col[0] 與 first_row[0] 的容許差
    sign_zero_tol: float = 1e-14  # 廣義牛頓法 sign(z) 視為 0 的門檻
    divergence_factor: float = 1e8  # 殘差超過初始殘差的倍數即視為發散
    reorth_threshold: float = 1e-8  # GMRES 再正交化觸發門檻

    # σ 搜尋區間（對數尺度）
    sigma_search_min: float = 1e-4
    sigma_search_max: float = 1e4
    sigma_search_tol: float = 1e-6
    sigma_grid_points: int = 161

    # 系統設定
    workers: int = 1
    log_level: str = "INFO"

    @model_validator(mode="after")
    def validate_numeric_config(self):
        """驗證數值設定"""
        for name in (
            "near_singular_tol",
            "corner_tol",
            "sign_zero_tol",
            "reorth_threshold",
            "sigma_search_tol",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name.upper()} 必須為正數")

        if self.divergence_factor <= 1:
            raise ValueError("DIVERGENCE_FACTOR 必須大於 1")

        if not 0 < self.sigma_search_min < self.sigma_search_max:
            raise ValueError("σ 搜尋區間必須滿足 0 < SIGMA_SEARCH_MIN < SIGMA_SEARCH_MAX")

        if self.sigma_grid_points < 3:
            raise ValueError("SIGMA_GRID_POINTS 至少為 3")

        if self.dense_cap < 1:
            raise ValueError("DENSE_CAP 至少為 1")

        if self.workers < 1:
            raise ValueError("WORKERS 至少為 1")

        self.log_level = self.log_level.upper()
        if self.log_level not in _LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL 不合法: {self.log_level}")

        return self


# 全域設定實例
settings = Settings()
