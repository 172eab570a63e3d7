import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ave_toeplitz.algorithms.toeplitz_core import fast_matvec

from .toeplitz import ToeplitzMatrix

EXACT_SOLUTION_TOL = 1e-12


class AveProblem(BaseModel):
    """絕對值方程 Ax − |x| = b"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: ToeplitzMatrix
    rhs: np.ndarray
    exact_solution: np.ndarray | None = None
    label: str = ""

    @field_validator("rhs", "exact_solution", mode="before")
    @classmethod
    def _to_complex(cls, value: object) -> np.ndarray | None:
        if value is None:
            return None
        array = np.array(value, dtype=np.complex128, copy=True)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_dimensions(self):
        n = self.matrix.n
        if self.rhs.shape != (n,):
            raise ValueError(f"右端項形狀 {self.rhs.shape} 與矩陣維度 {n} 不符")
        if not np.all(np.isfinite(self.rhs)):
            raise ValueError("右端項含有非有限值")

        if self.exact_solution is not None:
            if self.exact_solution.shape != (n,):
                raise ValueError("精確解維度與矩陣不符")
            residual = self.residual_norm(self.exact_solution)
            scale = self.rhs_norm or 1.0
            if residual / scale > EXACT_SOLUTION_TOL:
                raise ValueError(
                    f"精確解不滿足方程 (相對殘差 {residual / scale:.3e})"
                )
        return self

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def rhs_norm(self) -> float:
        return float(np.linalg.norm(self.rhs))

    def residual_vector(self, x: np.ndarray) -> np.ndarray:
        """Ax − |x| − b"""
        return fast_matvec(self.matrix, x) - np.abs(x) - self.rhs

    def residual_norm(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(self.residual_vector(x)))
