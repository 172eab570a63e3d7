"""稠密 LU 分解（測試基準與 HSS 內層求解）"""

import numpy as np
import numpy.typing as npt
from scipy import linalg

from ave_toeplitz.config.settings import settings
from ave_toeplitz.exceptions import DimensionError, SingularShiftError

LUFactor = tuple[np.ndarray, np.ndarray]


def dense_lu_factor(matrix: npt.ArrayLike, pivot_tol: float | None = None) -> LUFactor:
    """部分選主元 LU 分解，主元過小時拋出 SingularShiftError"""
    dense = np.asarray(matrix)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise DimensionError(f"需要方陣，實際形狀為 {dense.shape}")

    tol = settings.near_singular_tol if pivot_tol is None else pivot_tol
    lu, piv = linalg.lu_factor(dense, check_finite=True)
    smallest = float(np.min(np.abs(np.diag(lu))))
    if smallest <= tol:
        raise SingularShiftError(f"矩陣數值上奇異 (最小主元 {smallest:.3e})")
    return lu, piv


def dense_lu_solve(
    matrix: npt.ArrayLike, b: npt.ArrayLike, pivot_tol: float | None = None
) -> np.ndarray:
    """解 M x = b"""
    factor = dense_lu_factor(matrix, pivot_tol)
    rhs = np.asarray(b)
    if rhs.shape[0] != factor[0].shape[0]:
        raise DimensionError(f"右端項長度 {rhs.shape[0]} 與矩陣維度不符")
    return linalg.lu_solve(factor, rhs)
