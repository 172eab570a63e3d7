"""資料驗證模組

提供向量、維度與數值參數的驗證功能。
"""

import numpy as np
import numpy.typing as npt

from ave_toeplitz.exceptions import DimensionError, InvalidMatrixError, ParameterError


class VectorValidator:
    """向量驗證器"""

    @classmethod
    def validate_vector(
        cls, values: npt.ArrayLike, expected_length: int | None = None
    ) -> tuple[bool, list[str]]:
        """驗證一維向量

        Args:
            values: 待驗證的向量
            expected_length: 期望長度，None 表示只要求非空

        Returns:
            (是否有效, 錯誤訊息列表)
        """
        errors = []
        array = np.asarray(values)

        if array.ndim != 1:
            errors.append(f"必須是一維向量，實際維度為 {array.ndim}")
            return False, errors

        if array.size == 0:
            errors.append("向量不可為空")
        elif expected_length is not None and array.size != expected_length:
            errors.append(f"長度應為 {expected_length}，實際為 {array.size}")

        if array.dtype.kind not in "biufc":
            errors.append(f"不支援的資料型別: {array.dtype}")
        elif not np.all(np.isfinite(array)):
            errors.append("含有非有限值 (NaN 或 Inf)")

        return len(errors) == 0, errors

    @classmethod
    def ensure_complex_vector(
        cls,
        values: npt.ArrayLike,
        expected_length: int | None = None,
        name: str = "x",
    ) -> np.ndarray:
        """驗證並轉成 complex128 向量（複製一份）"""
        array = np.asarray(values)
        if array.ndim != 1:
            raise DimensionError(f"{name} 必須是一維向量，實際維度為 {array.ndim}")
        if array.size == 0:
            raise DimensionError(f"{name} 不可為空")
        if expected_length is not None and array.size != expected_length:
            raise DimensionError(
                f"{name} 長度應為 {expected_length}，實際為 {array.size}"
            )
        if array.dtype.kind not in "biufc":
            raise InvalidMatrixError(f"{name} 的資料型別不支援: {array.dtype}")
        if not np.all(np.isfinite(array)):
            raise InvalidMatrixError(f"{name} 含有非有限值")
        return np.array(array, dtype=np.complex128)

    @classmethod
    def ensure_real_vector(cls, values: npt.ArrayLike, name: str = "x") -> np.ndarray:
        """驗證實數向量，複數輸入直接拒絕"""
        array = np.asarray(values)
        if np.iscomplexobj(array):
            raise ParameterError(f"{name} 必須是實數向量")
        if array.ndim != 1:
            raise DimensionError(f"{name} 必須是一維向量")
        return np.asarray(array, dtype=np.float64)

    @staticmethod
    def ensure_positive(value: float, name: str) -> float:
        """確認純量為有限正數"""
        if not np.isfinite(value) or value <= 0:
            raise ParameterError(f"{name} 必須為正數，實際為 {value}")
        return float(value)
