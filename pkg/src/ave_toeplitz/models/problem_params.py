from pydantic import BaseModel, Field, model_validator


class Example1Params(BaseModel):
    """五對角複 Toeplitz 測試矩陣參數"""

    n: int = Field(ge=3)
    gamma: float = Field(default=10.0, gt=0)  # 對角元素 γ
    c: float = 2.0  # 上第一對角線 cι
    d: float = 3.0  # 上第二對角線 dι


class Example2Params(BaseModel):
    """分數階反應擴散方程離散參數

    tau 與 h 未指定時皆取 1/(n+1)。
    """

    n: int = Field(ge=1)  # 內部格點數
    alpha: float = Field(default=1.5, gt=1, lt=2)
    d_plus: float = Field(default=0.6, ge=0)
    d_minus: float = Field(default=0.4, ge=0)
    tau: float | None = Field(default=None, gt=0)
    h: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _default_steps(self):
        if self.h is None:
            self.h = 1.0 / (self.n + 1)
        if self.tau is None:
            self.tau = 1.0 / (self.n + 1)
        return self

    @property
    def step_ratio(self) -> float:
        """τ / h^α"""
        return float(self.tau) / float(self.h) ** self.alpha

    @property
    def rhs_scale(self) -> float:
        """右端項縮放 h^α"""
        return float(self.h) ** self.alpha
