"""Toeplitz 矩陣與循環/斜循環譜的資料模型"""

from functools import cached_property
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy import fft


def _as_complex(value: object) -> np.ndarray:
    return np.array(value, dtype=np.complex128, copy=True)


class ToeplitzMatrix(BaseModel):
    """非 Hermitian Toeplitz 矩陣

    只儲存第一行 (a_0 … a_{n-1}) 與第一列 (a_0, a_{-1} … a_{1-n})，
    不保存稠密矩陣。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    first_col: np.ndarray
    first_row: np.ndarray

    @field_validator("first_col", "first_row", mode="before")
    @classmethod
    def _to_complex(cls, value: object) -> np.ndarray:
        array = _as_complex(value)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_shape(self):
        if self.first_col.ndim != 1 or self.first_row.ndim != 1:
            raise ValueError("第一行與第一列必須是一維向量")
        if self.first_col.size == 0 or self.first_col.size != self.first_row.size:
            raise ValueError("第一行與第一列長度必須相同且至少為 1")
        return self

    @property
    def n(self) -> int:
        """矩陣維度"""
        return int(self.first_col.size)

    @property
    def diagonal(self) -> complex:
        """主對角元素 a_0"""
        return complex(self.first_col[0])

    @cached_property
    def embedding_fft(self) -> np.ndarray:
        """2n 循環嵌入第一行的 DFT，供快速矩陣向量乘法重複使用"""
        col = np.concatenate([self.first_col, [0.0], self.first_row[:0:-1]])
        return fft.fft(col)


class CirculantSpectrum(BaseModel):
    """循環矩陣 C 的特徵值 Λ_C = fft(c)

    DFT 採 scipy.fft 預設慣例：正變換指數為負號，1/n 在逆變換。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    lambdas: np.ndarray
    dft_sign: Literal[-1] = -1

    @property
    def min_real_part(self) -> float:
        return float(np.min(self.lambdas.real))


class SkewCirculantSpectrum(BaseModel):
    """斜循環矩陣 S 的特徵值 Λ_S = fft(Ω s)

    omega_j = exp(-iπj/n)，S = Ω* F⁻¹ Λ_S F Ω。
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    lambdas: np.ndarray
    omega: np.ndarray

    @property
    def min_real_part(self) -> float:
        return float(np.min(self.lambdas.real))
