"""測試問題產生器

兩類實驗問題：五對角複非 Hermitian Toeplitz 矩陣，
以及分數階擴散方程以平移 Grünwald 公式離散所得的 Toeplitz 矩陣。
"""

import logging

import numpy as np
import numpy.typing as npt

from ave_toeplitz.algorithms.toeplitz_core import (
    circulant_spectrum,
    cscs_split,
    skew_circulant_spectrum,
    toeplitz_matvec,
    toeplitz_new,
)
from ave_toeplitz.exceptions import ParameterError
from ave_toeplitz.models.problem import AveProblem
from ave_toeplitz.models.problem_params import Example1Params, Example2Params
from ave_toeplitz.models.toeplitz import ToeplitzMatrix
from ave_toeplitz.utils.validators import VectorValidator

logger = logging.getLogger(__name__)


def example1(params: Example1Params) -> ToeplitzMatrix:
    """first_col = [γ, −1−cι, −1−dι, 0, …]，first_row = [γ, cι, dι, 0, …]"""
    return _example1_band(params.n, params.gamma, params.c, params.d)


def _example1_band(n: int, gamma: float, c: float, d: float) -> ToeplitzMatrix:
    col = np.zeros(n, dtype=np.complex128)
    row = np.zeros(n, dtype=np.complex128)
    col[:3] = [gamma, -1 - 1j * c, -1 - 1j * d][:n]
    row[:3] = [gamma, 1j * c, 1j * d][:n]
    return toeplitz_new(col, row)


def example1_leading_block(
    n: int, gamma: float = 10.0, c: float = 2.0, d: float = 3.0
) -> ToeplitzMatrix:
    """n < 3 時取同一帶狀矩陣的左上 n×n 區塊"""
    if n < 1:
        raise ParameterError(f"n 至少為 1，實際為 {n}")
    if n >= 3:
        return example1(Example1Params(n=n, gamma=gamma, c=c, d=d))
    return _example1_band(n, gamma, c, d)


def grunwald_coeffs(alpha: float, count: int) -> np.ndarray:
    """平移 Grünwald 權重 g_0 … g_count

    g_0 = 1，g_k = (1 − (α+1)/k)·g_{k−1}。
    """
    if not 1 < alpha < 2:
        raise ParameterError(f"α 必須在 (1, 2) 內，實際為 {alpha}")
    if count < 0:
        raise ParameterError(f"count 不可為負，實際為 {count}")
    k = np.arange(1, count + 1)
    return np.concatenate([[1.0], np.cumprod((k - alpha - 1) / k)])


def fractional_matrix(params: Example2Params) -> ToeplitzMatrix:
    """A = I − (τ/h^α)(d₊G_α + d₋G_αᵀ)

    G_α 的第一行為 g_1 … g_n，第一列為 g_1, g_0, 0, …
    """
    n = params.n
    g = grunwald_coeffs(params.alpha, n)

    g_col = g[1 : n + 1]
    g_row = np.zeros(n)
    g_row[0] = g[1]
    if n > 1:
        g_row[1] = g[0]

    identity = np.zeros(n)
    identity[0] = 1.0
    ratio = params.step_ratio
    col = identity - ratio * (params.d_plus * g_col + params.d_minus * g_row)
    row = identity - ratio * (params.d_plus * g_row + params.d_minus * g_col)
    matrix = toeplitz_new(col, row)

    c, s = cscs_split(matrix)
    if circulant_spectrum(c).min_real_part <= 0 or skew_circulant_spectrum(s).min_real_part <= 0:
        logger.warning("分數階矩陣的 C 或 S 不是正定 (n=%d, α=%.3g)", n, params.alpha)
    return matrix


def exact_solution(n: int) -> np.ndarray:
    """x_k = (−1)^k ι，k = 1 … n"""
    if n < 1:
        raise ParameterError(f"n 至少為 1，實際為 {n}")
    k = np.arange(1, n + 1)
    return 1j * (-1.0) ** k


def rhs_from_solution(
    matrix: ToeplitzMatrix, x_star: npt.ArrayLike, scale: float = 1.0
) -> np.ndarray:
    """b = scale·(A x* − |x*|)"""
    VectorValidator.ensure_positive(scale, "scale")
    vec = VectorValidator.ensure_complex_vector(x_star, matrix.n, name="x_star")
    return scale * (toeplitz_matvec(matrix, vec) - np.abs(vec))


def build_example1_problem(params: Example1Params | int, **overrides: float) -> AveProblem:
    """五對角問題，右端項由 x* = (−1)^k ι 產生"""
    if isinstance(params, int):
        matrix = example1_leading_block(params, **overrides)
        label = f"example1(n={params})"
    else:
        matrix = example1(params)
        label = f"example1(n={params.n}, γ={params.gamma}, c={params.c}, d={params.d})"
    x_star = exact_solution(matrix.n)
    return AveProblem(
        matrix=matrix,
        rhs=rhs_from_solution(matrix, x_star),
        exact_solution=x_star,
        label=label,
    )


def build_example2_problem(params: Example2Params) -> AveProblem:
    """分數階問題，右端項為 f̃ = h^α·b，對應的精確解為 h^α·x*"""
    matrix = fractional_matrix(params)
    scale = params.rhs_scale
    x_star = exact_solution(params.n)
    return AveProblem(
        matrix=matrix,
        rhs=rhs_from_solution(matrix, x_star, scale),
        exact_solution=scale * x_star,
        label=f"example2(n={params.n}, α={params.alpha}, d₊={params.d_plus}, d₋={params.d_minus})",
    )
