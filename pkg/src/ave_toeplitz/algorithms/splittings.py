"""分裂迭代的共同介面

A = P₁ + P₂，每個半步需要 (σI + P₁)⁻¹、(σI + P₂)⁻¹ 以及 P₁、P₂ 的作用。
CSCS 分裂用 FFT，HSS 分裂用預先分解的稠密 LU。
"""

import logging
from typing import Protocol

import numpy as np
from scipy import fft, linalg

from ave_toeplitz.algorithms.dense_lu import dense_lu_factor
from ave_toeplitz.algorithms.toeplitz_core import (
    circulant_spectrum,
    cscs_split,
    fast_matvec,
    materialize_dense,
    shifted_spectrum,
    skew_circulant_spectrum,
)
from ave_toeplitz.models.toeplitz import ToeplitzMatrix
from ave_toeplitz.utils.validators import VectorValidator

logger = logging.getLogger(__name__)


class Splitting(Protocol):
    """兩部分分裂 A = P₁ + P₂"""

    matrix: ToeplitzMatrix
    sigma: float

    def matvec(self, x: np.ndarray) -> np.ndarray: ...

    def apply_first(self, x: np.ndarray) -> np.ndarray: ...

    def apply_second(self, x: np.ndarray) -> np.ndarray: ...

    def solve_first(self, y: np.ndarray) -> np.ndarray: ...

    def solve_second(self, y: np.ndarray) -> np.ndarray: ...


class CscsSplitting:
    """循環/斜循環分裂，所有運算皆為 O(n log n)"""

    name = "CSCS"

    def __init__(self, matrix: ToeplitzMatrix, sigma: float):
        self.matrix = matrix
        self.sigma = VectorValidator.ensure_positive(sigma, "σ")

        c, s = cscs_split(matrix)
        self.circulant = circulant_spectrum(c)
        self.skew = skew_circulant_spectrum(s)

        # 建構時檢查一次，之後的半步直接使用
        self._shift_c = shifted_spectrum(self.sigma, self.circulant.lambdas, None)
        self._shift_s = shifted_spectrum(self.sigma, self.skew.lambdas, None)
        self._omega = self.skew.omega
        self._omega_conj = self.skew.omega.conj()

        if not self.is_positive_definite:
            logger.warning(
                "C 或 S 不是正定 (min Re λ_C=%.3e, min Re λ_S=%.3e)，收斂性無保證",
                self.circulant.min_real_part,
                self.skew.min_real_part,
            )

    @property
    def is_positive_definite(self) -> bool:
        """C 與 S 的譜實部皆為正"""
        return self.circulant.min_real_part > 0 and self.skew.min_real_part > 0

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return fast_matvec(self.matrix, x)

    def apply_first(self, x: np.ndarray) -> np.ndarray:
        return fft.ifft(self.circulant.lambdas * fft.fft(x))

    def apply_second(self, x: np.ndarray) -> np.ndarray:
        spectrum = self.skew.lambdas * fft.fft(self._omega * x)
        return self._omega_conj * fft.ifft(spectrum)

    def solve_first(self, y: np.ndarray) -> np.ndarray:
        return fft.ifft(fft.fft(y) / self._shift_c)

    def solve_second(self, y: np.ndarray) -> np.ndarray:
        return self._omega_conj * fft.ifft(fft.fft(self._omega * y) / self._shift_s)


class HssSplitting:
    """Hermitian/斜 Hermitian 分裂，H = (A + Aᴴ)/2，K = (A - Aᴴ)/2"""

    name = "HSS"

    def __init__(self, matrix: ToeplitzMatrix, sigma: float, dense_cap: int | None = None):
        self.matrix = matrix
        self.sigma = VectorValidator.ensure_positive(sigma, "σ")

        dense = materialize_dense(matrix, dense_cap)
        self.hermitian = (dense + dense.conj().T) / 2
        self.skew_hermitian = (dense - dense.conj().T) / 2

        identity = np.eye(matrix.n)
        self._lu_h = dense_lu_factor(self.sigma * identity + self.hermitian)
        self._lu_k = dense_lu_factor(self.sigma * identity + self.skew_hermitian)
        logger.debug("HSS 分裂完成稠密 LU 分解 (n=%d, σ=%.6g)", matrix.n, self.sigma)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return fast_matvec(self.matrix, x)

    def apply_first(self, x: np.ndarray) -> np.ndarray:
        return self.hermitian @ x

    def apply_second(self, x: np.ndarray) -> np.ndarray:
        return self.skew_hermitian @ x

    def solve_first(self, y: np.ndarray) -> np.ndarray:
        return linalg.lu_solve(self._lu_h, y, check_finite=False)

    def solve_second(self, y: np.ndarray) -> np.ndarray:
        return linalg.lu_solve(self._lu_k, y, check_finite=False)


def splitting_sweep(splitting: Splitting, x: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """一次兩半步掃描，右端項固定為 rhs

    (σI + P₁) x½ = (σI − P₂) x + rhs
    (σI + P₂) x' = (σI − P₁) x½ + rhs
    """
    sigma = splitting.sigma
    half = splitting.solve_first(sigma * x - splitting.apply_second(x) + rhs)
    return splitting.solve_second(sigma * half - splitting.apply_first(half) + rhs)
