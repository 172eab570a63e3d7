"""Toeplitz 核心運算

提供 Toeplitz 矩陣建構、CSCS 分裂、循環/斜循環譜、
O(n log n) 的矩陣向量乘法與平移逆運算。
"""

import numpy as np
import numpy.typing as npt
from scipy import fft, linalg

from ave_toeplitz.config.settings import settings
from ave_toeplitz.exceptions import (
    DenseCapError,
    DimensionError,
    InvalidMatrixError,
    SingularShiftError,
)
from ave_toeplitz.models.toeplitz import (
    CirculantSpectrum,
    SkewCirculantSpectrum,
    ToeplitzMatrix,
)
from ave_toeplitz.utils.validators import VectorValidator


def toeplitz_new(
    first_col: npt.ArrayLike,
    first_row: npt.ArrayLike,
    corner_tol: float | None = None,
) -> ToeplitzMatrix:
    """建立並驗證 Toeplitz 矩陣

    Args:
        first_col: 第一行 a_0 … a_{n-1}
        first_row: 第一列 a_0, a_{-1} … a_{1-n}
        corner_tol: 角落元素容許差，預設取 settings.corner_tol

    Returns:
        ToeplitzMatrix
    """
    col = VectorValidator.ensure_complex_vector(first_col, name="first_col")
    row = VectorValidator.ensure_complex_vector(first_row, name="first_row")
    if col.size != row.size:
        raise DimensionError(f"第一行長度 {col.size} 與第一列長度 {row.size} 不同")

    tol = settings.corner_tol if corner_tol is None else corner_tol
    if abs(col[0] - row[0]) > tol:
        raise InvalidMatrixError(
            f"對角元素不一致: first_col[0]={col[0]}, first_row[0]={row[0]}"
        )
    row[0] = col[0]
    return ToeplitzMatrix(first_col=col, first_row=row)


def check_dense_cap(n: int, dense_cap: int | None = None) -> None:
    cap = settings.dense_cap if dense_cap is None else dense_cap
    if n > cap:
        raise DenseCapError(f"n={n} 超過稠密運算上限 {cap}")


def materialize_dense(matrix: ToeplitzMatrix, dense_cap: int | None = None) -> np.ndarray:
    """展開成稠密矩陣，M[i, j] = a_{i-j}（僅供測試與小型基準）"""
    check_dense_cap(matrix.n, dense_cap)
    return linalg.toeplitz(matrix.first_col, matrix.first_row)


def toeplitz_matvec(matrix: ToeplitzMatrix, x: npt.ArrayLike) -> np.ndarray:
    """以 2n 循環嵌入計算 A·x"""
    vec = VectorValidator.ensure_complex_vector(x, matrix.n)
    return fast_matvec(matrix, vec)


def fast_matvec(matrix: ToeplitzMatrix, vec: np.ndarray) -> np.ndarray:
    """不做輸入檢查的 A·x，供迭代內迴圈使用"""
    n = matrix.n
    padded = np.concatenate([vec, np.zeros(n, dtype=np.complex128)])
    return fft.ifft(matrix.embedding_fft * fft.fft(padded))[:n]


def cscs_split(matrix: ToeplitzMatrix) -> tuple[np.ndarray, np.ndarray]:
    """A = C + S 的循環/斜循環分裂

    Returns:
        (C 的第一行, S 的第一行)
    """
    col, row = matrix.first_col, matrix.first_row
    wrapped = row[:0:-1]  # a_{k-n}, k = 1 … n-1

    c = np.empty(matrix.n, dtype=np.complex128)
    s = np.empty(matrix.n, dtype=np.complex128)
    c[0] = s[0] = col[0] / 2
    c[1:] = (col[1:] + wrapped) / 2
    s[1:] = (col[1:] - wrapped) / 2
    return c, s


def skew_omega(n: int) -> np.ndarray:
    """斜循環對角縮放 Ω 的對角元素 exp(-iπj/n)"""
    return np.exp(-1j * np.pi * np.arange(n) / n)


def dense_circulant(c: npt.ArrayLike) -> np.ndarray:
    """第一行為 c 的稠密循環矩陣"""
    return linalg.circulant(np.asarray(c, dtype=np.complex128))


def dense_skew_circulant(s: npt.ArrayLike) -> np.ndarray:
    """第一行為 s 的稠密斜循環矩陣（環繞元素取負號）"""
    s = np.asarray(s, dtype=np.complex128)
    row = np.concatenate([s[:1], -s[:0:-1]])
    return linalg.toeplitz(s, row)


def circulant_spectrum(c: npt.ArrayLike) -> CirculantSpectrum:
    """Λ_C = fft(c)"""
    vec = VectorValidator.ensure_complex_vector(c, name="c")
    return CirculantSpectrum(n=vec.size, lambdas=fft.fft(vec))


def skew_circulant_spectrum(s: npt.ArrayLike) -> SkewCirculantSpectrum:
    """Λ_S = fft(Ω ⊙ s)"""
    vec = VectorValidator.ensure_complex_vector(s, name="s")
    omega = skew_omega(vec.size)
    return SkewCirculantSpectrum(n=vec.size, lambdas=fft.fft(omega * vec), omega=omega)


def shifted_spectrum(
    sigma: float, lambdas: np.ndarray, near_singular_tol: float | None
) -> np.ndarray:
    VectorValidator.ensure_positive(sigma, "σ")
    tol = settings.near_singular_tol if near_singular_tol is None else near_singular_tol
    shifted = sigma + lambdas
    smallest = float(np.min(np.abs(shifted)))
    if smallest <= tol:
        raise SingularShiftError(f"σ={sigma} 使平移譜接近奇異 (min|σ+λ|={smallest:.3e})")
    return shifted


def apply_circulant(spec: CirculantSpectrum, x: npt.ArrayLike) -> np.ndarray:
    """C·x"""
    vec = VectorValidator.ensure_complex_vector(x, spec.n)
    return fft.ifft(spec.lambdas * fft.fft(vec))


def apply_skew_circulant(spec: SkewCirculantSpectrum, x: npt.ArrayLike) -> np.ndarray:
    """S·x = Ω* F⁻¹ Λ_S F Ω x"""
    vec = VectorValidator.ensure_complex_vector(x, spec.n)
    return spec.omega.conj() * fft.ifft(spec.lambdas * fft.fft(spec.omega * vec))


def apply_shifted_circulant_inverse(
    sigma: float,
    spec: CirculantSpectrum,
    y: npt.ArrayLike,
    near_singular_tol: float | None = None,
) -> np.ndarray:
    """(σI + C)⁻¹ y"""
    shifted = shifted_spectrum(sigma, spec.lambdas, near_singular_tol)
    vec = VectorValidator.ensure_complex_vector(y, spec.n, name="y")
    return fft.ifft(fft.fft(vec) / shifted)


def apply_shifted_skew_inverse(
    sigma: float,
    spec: SkewCirculantSpectrum,
    y: npt.ArrayLike,
    near_singular_tol: float | None = None,
) -> np.ndarray:
    """(σI + S)⁻¹ y"""
    shifted = shifted_spectrum(sigma, spec.lambdas, near_singular_tol)
    vec = VectorValidator.ensure_complex_vector(y, spec.n, name="y")
    return spec.omega.conj() * fft.ifft(fft.fft(spec.omega * vec) / shifted)
