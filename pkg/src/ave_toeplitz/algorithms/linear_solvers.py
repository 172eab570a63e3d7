"""線性系統求解

Toeplitz 線性系統的 CSCS 定常迭代，以及迭代矩陣 M(σ)、G(σ)
的稠密組裝（供診斷與測試基準使用）。
"""

import logging

import numpy as np
import numpy.typing as npt
from scipy import linalg

from ave_toeplitz.algorithms.dense_lu import dense_lu_solve
from ave_toeplitz.algorithms.splittings import CscsSplitting, splitting_sweep
from ave_toeplitz.algorithms.toeplitz_core import (
    check_dense_cap,
    cscs_split,
    dense_circulant,
    dense_skew_circulant,
)
from ave_toeplitz.config.settings import settings
from ave_toeplitz.exceptions import DimensionError, SingularShiftError
from ave_toeplitz.models.report import LinearSolveReport
from ave_toeplitz.models.toeplitz import ToeplitzMatrix
from ave_toeplitz.utils.validators import VectorValidator

logger = logging.getLogger(__name__)

__all__ = [
    "cscs_solve",
    "dense_cscs_factors",
    "dense_lu_solve",
    "iteration_matrix_dense",
    "iteration_rhs_matrix_dense",
    "picard_inner_sweep_requirement",
    "spectral_radius",
]


def cscs_solve(
    matrix: ToeplitzMatrix,
    b: npt.ArrayLike,
    sigma: float,
    tol: float = 1e-7,
    maxit: int = 1000,
    x0: npt.ArrayLike | None = None,
    divergence_factor: float | None = None,
) -> tuple[np.ndarray, LinearSolveReport]:
    """以 CSCS 迭代解 Ax = b

    Args:
        matrix: 係數矩陣
        b: 右端項
        sigma: 平移參數 σ > 0
        tol: 相對殘差門檻
        maxit: 最大迭代次數
        x0: 初始猜測，預設為零向量
        divergence_factor: 殘差超過初始殘差此倍數即停止

    Returns:
        (近似解, LinearSolveReport)
    """
    rhs = VectorValidator.ensure_complex_vector(b, matrix.n, name="b")
    x = (
        np.zeros(matrix.n, dtype=np.complex128)
        if x0 is None
        else VectorValidator.ensure_complex_vector(x0, matrix.n, name="x0")
    )
    factor = settings.divergence_factor if divergence_factor is None else divergence_factor
    splitting = CscsSplitting(matrix, sigma)

    scale = float(np.linalg.norm(rhs)) or 1.0
    residual = float(np.linalg.norm(rhs - splitting.matvec(x))) / scale
    initial = residual
    history = [residual]
    iterations = 0
    diverged = False

    while residual > tol and iterations < maxit:
        x = splitting_sweep(splitting, x, rhs)
        iterations += 1
        residual = float(np.linalg.norm(rhs - splitting.matvec(x))) / scale
        history.append(residual)
        if not np.isfinite(residual) or residual > factor * initial:
            logger.warning("CSCS 迭代在第 %d 步發散 (殘差 %.3e)", iterations, residual)
            diverged = True
            break

    converged = bool(residual <= tol)
    logger.debug("CSCS 線性求解: n=%d, 迭代 %d 次, 殘差 %.3e", matrix.n, iterations, residual)
    return x, LinearSolveReport(
        iterations=iterations,
        relative_residual=residual,
        converged=converged,
        tol=tol,
        diverged=diverged,
        residual_history=history,
    )


def dense_cscs_factors(
    matrix: ToeplitzMatrix, dense_cap: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """稠密的 C 與 S"""
    check_dense_cap(matrix.n, dense_cap)
    c, s = cscs_split(matrix)
    return dense_circulant(c), dense_skew_circulant(s)


def _shifted_solve(shifted: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return linalg.solve(shifted, rhs)
    except linalg.LinAlgError as e:
        raise SingularShiftError(f"平移因子奇異: {e}") from e


def iteration_matrix_dense(
    matrix: ToeplitzMatrix, sigma: float, dense_cap: int | None = None
) -> np.ndarray:
    """M(σ) = (σI+S)⁻¹(σI−C)(σI+C)⁻¹(σI−S)"""
    sigma = VectorValidator.ensure_positive(sigma, "σ")
    circ, skew = dense_cscs_factors(matrix, dense_cap)
    shift = sigma * np.eye(matrix.n)
    inner = _shifted_solve(shift + circ, shift - skew)
    return _shifted_solve(shift + skew, (shift - circ) @ inner)


def iteration_rhs_matrix_dense(
    matrix: ToeplitzMatrix, sigma: float, dense_cap: int | None = None
) -> np.ndarray:
    """G(σ) = 2σ(σI+S)⁻¹(σI+C)⁻¹，一次掃描為 x' = M(σ)x + G(σ)b"""
    sigma = VectorValidator.ensure_positive(sigma, "σ")
    circ, skew = dense_cscs_factors(matrix, dense_cap)
    shift = sigma * np.eye(matrix.n)
    inverse_c = _shifted_solve(shift + circ, np.eye(matrix.n))
    return 2 * sigma * _shifted_solve(shift + skew, inverse_c)


def spectral_radius(dense: np.ndarray) -> float:
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise DimensionError(f"需要方陣，實際形狀為 {dense.shape}")
    return float(np.max(np.abs(linalg.eigvals(dense))))


def picard_inner_sweep_requirement(
    matrix: ToeplitzMatrix,
    sigma: float,
    eta: float,
    max_sweeps: int = 200,
    dense_cap: int | None = None,
) -> int | None:
    """最小的 N，使得 N ≤ s ≤ max_sweeps 時 ‖M(σ)^s‖₂ < (1−η)/(1+η)

    在 ‖A⁻¹‖₂ < 1 時，內掃描次數 l_k ≥ N 保證 Picard-CSCS 收斂。
    找不到時回傳 None。
    """
    if not 0 <= eta < 1:
        raise ValueError(f"η 必須在 [0, 1) 內，實際為 {eta}")

    target = (1 - eta) / (1 + eta)
    iteration = iteration_matrix_dense(matrix, sigma, dense_cap)
    power = np.eye(matrix.n, dtype=np.complex128)
    requirement: int | None = None

    for sweeps in range(1, max_sweeps + 1):
        power = iteration @ power
        if np.linalg.norm(power, 2) < target:
            if requirement is None:
                requirement = sweeps
        else:
            requirement = None
    return requirement
