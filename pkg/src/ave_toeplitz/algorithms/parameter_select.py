"""迭代參數選取

σ_CSCS：在對數尺度上最小化收斂因子上界 f(σ)。
σ_HSS：Hermitian 部分極端特徵值的幾何平均 √(λ_min λ_max)。
"""

import logging

import numpy as np
from scipy import linalg, optimize

from ave_toeplitz.algorithms.toeplitz_core import materialize_dense
from ave_toeplitz.config.settings import settings
from ave_toeplitz.exceptions import IndefiniteHermitianPartError, SingularShiftError
from ave_toeplitz.models.toeplitz import (
    CirculantSpectrum,
    SkewCirculantSpectrum,
    ToeplitzMatrix,
)
from ave_toeplitz.utils.validators import VectorValidator

logger = logging.getLogger(__name__)


def _cayley_max(sigma: float, lambdas: np.ndarray, near_singular_tol: float) -> float:
    shifted = sigma + lambdas
    if np.min(np.abs(shifted)) <= near_singular_tol:
        raise SingularShiftError(f"σ={sigma} 使 σ+λ 接近零")
    return float(np.max(np.abs((sigma - lambdas) / shifted)))


def convergence_factor_bound(
    sigma: float,
    circulant: CirculantSpectrum,
    skew: SkewCirculantSpectrum,
    near_singular_tol: float | None = None,
) -> float:
    """f(σ) = max|(σ−λ_C)/(σ+λ_C)| · max|(σ−λ_S)/(σ+λ_S)|"""
    VectorValidator.ensure_positive(sigma, "σ")
    tol = settings.near_singular_tol if near_singular_tol is None else near_singular_tol
    return _cayley_max(sigma, circulant.lambdas, tol) * _cayley_max(sigma, skew.lambdas, tol)


def sigma_cscs_opt(
    circulant: CirculantSpectrum,
    skew: SkewCirculantSpectrum,
    lower: float | None = None,
    upper: float | None = None,
    tol: float | None = None,
) -> float:
    """在 [lower, upper] 上最小化 f(σ)

    先以對數格點定位最小值，再於相鄰格點構成的區間內
    以黃金分割搜尋 log σ。最小值落在邊界時回傳邊界並警告。
    """
    lower = settings.sigma_search_min if lower is None else lower
    upper = settings.sigma_search_max if upper is None else upper
    tol = settings.sigma_search_tol if tol is None else tol

    if circulant.min_real_part <= 0 or skew.min_real_part <= 0:
        logger.warning("C 或 S 不是正定，f(σ) 可能不小於 1")

    def objective(log_sigma: float) -> float:
        try:
            return convergence_factor_bound(float(np.exp(log_sigma)), circulant, skew)
        except SingularShiftError:
            return np.inf

    grid = np.linspace(np.log(lower), np.log(upper), settings.sigma_grid_points)
    values = np.array([objective(t) for t in grid])
    best = int(np.argmin(values))

    if best in (0, grid.size - 1):
        boundary = float(np.exp(grid[best]))
        logger.warning("f(σ) 的最小值落在搜尋邊界 σ=%.6g", boundary)
        return boundary

    try:
        result = optimize.minimize_scalar(
            objective,
            bracket=(grid[best - 1], grid[best], grid[best + 1]),
            method="golden",
            tol=tol,
        )
        candidate = float(result.x)
    except ValueError:
        candidate = float(grid[best])
    # 平坦或非單峰時保留格點最佳值
    if objective(candidate) > values[best]:
        candidate = float(grid[best])
    sigma = float(np.exp(candidate))
    logger.debug("σ_CSCS=%.6g, f(σ)=%.6g", sigma, objective(candidate))
    return sigma


def hermitian_part_extremes(
    matrix: ToeplitzMatrix, dense_cap: int | None = None
) -> tuple[float, float]:
    """H = (A + Aᴴ)/2 的最小與最大特徵值"""
    dense = materialize_dense(matrix, dense_cap)
    hermitian = (dense + dense.conj().T) / 2
    n = matrix.n
    smallest = linalg.eigvalsh(hermitian, subset_by_index=[0, 0])[0]
    largest = linalg.eigvalsh(hermitian, subset_by_index=[n - 1, n - 1])[0]
    return float(smallest), float(largest)


def sigma_hss_opt(matrix: ToeplitzMatrix, dense_cap: int | None = None) -> float:
    """σ_HSS = √(λ_min(H) λ_max(H))"""
    smallest, largest = hermitian_part_extremes(matrix, dense_cap)
    if smallest <= 0:
        raise IndefiniteHermitianPartError(
            f"Hermitian 部分不是正定 (λ_min={smallest:.6g})"
        )
    return float(np.sqrt(smallest * largest))
