"""絕對值方程求解器

Picard-CSCS、非線性 CSCS-like（及各自的殘差更新形式）、
HSS 基準方法與廣義牛頓法。所有方法以零向量為預設初始猜測，
不收斂時回報 converged=False 而不拋出例外。
"""

import logging
import time
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
from scipy.sparse.linalg import LinearOperator

from ave_toeplitz.algorithms.krylov import gmres_restarted, tfqmr
from ave_toeplitz.algorithms.parameter_select import sigma_cscs_opt, sigma_hss_opt
from ave_toeplitz.algorithms.smoothing import theta_map
from ave_toeplitz.algorithms.splittings import (
    CscsSplitting,
    HssSplitting,
    Splitting,
    splitting_sweep,
)
from ave_toeplitz.algorithms.toeplitz_core import (
    circulant_spectrum,
    cscs_split,
    fast_matvec,
    skew_circulant_spectrum,
)
from ave_toeplitz.config.settings import settings
from ave_toeplitz.exceptions import ParameterError
from ave_toeplitz.models.problem import AveProblem
from ave_toeplitz.models.report import IterationReport
from ave_toeplitz.models.solver_config import (
    CSCS_METHODS,
    HSS_METHODS,
    InnerKrylov,
    SolverConfig,
    SolverMethod,
)
from ave_toeplitz.utils.validators import VectorValidator

logger = logging.getLogger(__name__)

IterationCallback = Callable[[int, np.ndarray], None]
OuterStep = Callable[[np.ndarray], tuple[np.ndarray, int]]


def abs_vec(x: npt.ArrayLike) -> np.ndarray:
    """逐元素複數模 |x|"""
    return np.abs(np.asarray(x))


def sign_vec(x: npt.ArrayLike, zero_tol: float | None = None) -> np.ndarray:
    """sign(z) = z/|z|，|z| 不大於 zero_tol 時為 0"""
    tol = settings.sign_zero_tol if zero_tol is None else zero_tol
    z = np.asarray(x, dtype=np.complex128)
    modulus = np.abs(z)
    out = np.zeros_like(z)
    mask = modulus > tol
    out[mask] = z[mask] / modulus[mask]
    return out


def ave_residual(problem: AveProblem, x: npt.ArrayLike) -> float:
    """相對殘差 ‖Ax − |x| − b‖₂ / ‖b‖₂"""
    vec = VectorValidator.ensure_complex_vector(x, problem.n)
    b_norm = problem.rhs_norm
    if b_norm == 0:
        raise ParameterError("右端項為零向量，相對殘差無定義")
    return problem.residual_norm(vec) / b_norm


def resolve_sigma(problem: AveProblem, config: SolverConfig) -> float | None:
    """取得 σ：使用設定值，或依方法自動選取最佳參數"""
    if not config.uses_sigma:
        return None
    if config.sigma is not None:
        return config.sigma
    if config.method in HSS_METHODS:
        return sigma_hss_opt(problem.matrix)
    c, s = cscs_split(problem.matrix)
    return sigma_cscs_opt(circulant_spectrum(c), skew_circulant_spectrum(s))


def _initial_vector(
    problem: AveProblem, initial_guess: npt.ArrayLike | None
) -> np.ndarray:
    if initial_guess is None:
        return np.zeros(problem.n, dtype=np.complex128)
    return VectorValidator.ensure_complex_vector(initial_guess, problem.n, name="initial_guess")


def _run_outer(
    problem: AveProblem,
    config: SolverConfig,
    method: SolverMethod,
    sigma: float | None,
    step: OuterStep,
    initial_guess: npt.ArrayLike | None,
    callback: IterationCallback | None,
) -> tuple[np.ndarray, IterationReport]:
    """共同外迴圈：記錄殘差歷史並處理停止條件"""
    start = time.perf_counter()
    x = _initial_vector(problem, initial_guess)
    scale = problem.rhs_norm or 1.0

    residual = problem.residual_norm(x) / scale
    history = [residual]
    inner_counts: list[int] = []
    converged = residual <= config.outer_tol

    while not converged and len(inner_counts) < config.outer_maxit:
        x, inner = step(x)
        inner_counts.append(inner)
        if callback is not None:
            callback(len(inner_counts), x)

        residual = problem.residual_norm(x) / scale
        history.append(residual)
        logger.debug(
            "%s 第 %d 步: 殘差 %.3e (內迭代 %d)", method.value, len(inner_counts), residual, inner
        )
        if not np.isfinite(residual):
            logger.warning("%s 在第 %d 步產生非有限值，停止迭代", method.value, len(inner_counts))
            break
        converged = residual <= config.outer_tol

    report = IterationReport(
        method=method,
        n=problem.n,
        sigma=sigma,
        outer_tol=config.outer_tol,
        it_out=len(inner_counts),
        inner_iterations=inner_counts,
        residual_history=history,
        converged=bool(converged),
        wall_seconds=time.perf_counter() - start,
    )
    logger.info(
        "%s n=%d: IT_out=%d, IT=%d, 殘差 %.3e, %s",
        method.value,
        problem.n,
        report.it_out,
        report.it_total,
        report.final_residual,
        "收斂" if report.converged else "Fail",
    )
    return x, report


def _picard_step(
    problem: AveProblem, config: SolverConfig, splitting: Splitting
) -> OuterStep:
    """Ax⁽ᵏ⁺¹⁾ = |x⁽ᵏ⁾| + b，內層以分裂掃描近似求解"""
    b = problem.rhs

    def step(x: np.ndarray) -> tuple[np.ndarray, int]:
        rhs = np.abs(x) + b
        initial = float(np.linalg.norm(rhs - splitting.matvec(x)))
        if initial == 0:
            return x, 0
        y = x
        sweeps = 0
        while sweeps < config.inner_maxit:
            y = splitting_sweep(splitting, y, rhs)
            sweeps += 1
            if np.linalg.norm(rhs - splitting.matvec(y)) <= config.inner_tol * initial:
                break
        return y, sweeps

    return step


def _picard_residual_step(
    problem: AveProblem, config: SolverConfig, splitting: Splitting
) -> OuterStep:
    """殘差更新形式：As = r⁽ᵏ⁾，s⁽ᵏ'⁰⁾ = 0，x⁽ᵏ⁺¹⁾ = x⁽ᵏ⁾ + s"""
    b = problem.rhs

    def step(x: np.ndarray) -> tuple[np.ndarray, int]:
        r = np.abs(x) + b - splitting.matvec(x)
        initial = float(np.linalg.norm(r))
        if initial == 0:
            return x, 0
        s = np.zeros_like(r)
        sweeps = 0
        while sweeps < config.inner_maxit:
            s = splitting_sweep(splitting, s, r)
            sweeps += 1
            if np.linalg.norm(r - splitting.matvec(s)) <= config.inner_tol * initial:
                break
        return x + s, sweeps

    return step


def _nonlinear_step(problem: AveProblem, splitting: Splitting) -> OuterStep:
    """每個半步都以當前迭代值更新 |x|"""

    def step(x: np.ndarray) -> tuple[np.ndarray, int]:
        return theta_map(splitting, problem.rhs, x), 1

    return step


def _nonlinear_residual_step(problem: AveProblem, splitting: Splitting) -> OuterStep:
    """殘差更新形式，x½ = x + (σI+P₁)⁻¹ r，x' = x½ + (σI+P₂)⁻¹ r½"""
    b = problem.rhs

    def step(x: np.ndarray) -> tuple[np.ndarray, int]:
        half = x + splitting.solve_first(np.abs(x) + b - splitting.matvec(x))
        new = half + splitting.solve_second(np.abs(half) + b - splitting.matvec(half))
        return new, 1

    return step


def _require_sigma(problem: AveProblem, config: SolverConfig, method: SolverMethod) -> float:
    sigma = resolve_sigma(problem, config.model_copy(update={"method": method}))
    if sigma is None:
        raise ParameterError(f"{method.value} 需要 σ")
    return sigma


def picard_cscs(
    problem: AveProblem,
    config: SolverConfig,
    *,
    initial_guess: npt.ArrayLike | None = None,
    callback: IterationCallback | None = None,
) -> tuple[np.ndarray, IterationReport]:
    """Picard-CSCS 迭代"""
    method = SolverMethod.PICARD_CSCS
    sigma = _require_sigma(problem, config, method)
    splitting = CscsSplitting(problem.matrix, sigma)
    step = _picard_step(problem, config, splitting)
    return _run_outer(problem, config, method, sigma, step, initial_guess, callback)


def picard_cscs_residual_update(
    problem: AveProblem,
    config: SolverConfig,
    *,
    initial_guess: npt.ArrayLike | None = None,
    callback: IterationCallback | None = None,
) -> tuple[np.ndarray, IterationReport]:
    """殘差更新形式的 Picard-CSCS"""
    method = SolverMethod.PICARD_CSCS_RU
    sigma = _require_sigma(problem, config, method)
    splitting = CscsSplitting(problem.matrix, sigma)
    step = _picard_residual_step(problem, config, splitting)
    return _run_outer(problem, config, method, sigma, step, initial_guess, callback)


def cscs_like(
    problem: AveProblem,
    config: SolverConfig,
    *,
    initial_guess: npt.ArrayLike | None = None,
    callback: IterationCallback | None = None,
) -> tuple[np.ndarray, IterationReport]:
    """非線性 CSCS-like 迭代 x⁽ᵏ⁺¹⁾ = Θ(x⁽ᵏ⁾)"""
    method = SolverMethod.CSCS_LIKE
    sigma = _require_sigma(problem, config, method)
    splitting = CscsSplitting(problem.matrix, sigma)
    step = _nonlinear_step(problem, splitting)
    return _run_outer(problem, config, method, sigma, step, initial_guess, callback)


def cscs_like_residual_update(
    problem: AveProblem,
    config: SolverConfig,
    *,
    initial_guess: npt.ArrayLike | None = None,
    callback: IterationCallback | None = None,
) -> tuple[np.ndarray, IterationReport]:
    """殘差更新形式的 CSCS-like 迭代"""
    method = SolverMethod.CSCS_LIKE_RU
    sigma = _require_sigma(problem, config, method)
    splitting = CscsSplitting(problem.matrix, sigma)
    step = _nonlinear_residual_step(problem, splitting)
    return _run_outer(problem, config, method, sigma, step, initial_guess, callback)


def picard_hss(
    problem: AveProblem,
    config: SolverConfig,
    *,
    initial_guess: npt.ArrayLike | None = None,
    callback: IterationCallback | None = None,
) -> tuple[np.ndarray, IterationReport]:
    """Picard-HSS 基準方法"""
    method = SolverMethod.PICARD_HSS
    sigma = _require_sigma(problem, config, method)
    splitting = HssSplitting(problem.matrix, sigma)
    step = _picard_step(problem, config, splitting)
    return _run_outer(problem, config, method, sigma, step, initial_guess, callback)


def hss_like(
    problem: AveProblem,
    config: SolverConfig,
    *,
    initial_guess: npt.ArrayLike | None = None,
    callback: IterationCallback | None = None,
) -> tuple[np.ndarray, IterationReport]:
    """非線性 HSS-like 基準方法"""
    method = SolverMethod.HSS_LIKE
    sigma = _require_sigma(problem, config, method)
    splitting = HssSplitting(problem.matrix, sigma)
    step = _nonlinear_step(problem, splitting)
    return _run_outer(problem, config, method, sigma, step, initial_guess, callback)


def generalized_newton(
    problem: AveProblem,
    config: SolverConfig,
    inner: InnerKrylov = InnerKrylov.GMRES,
    *,
    initial_guess: npt.ArrayLike | None = None,
    callback: IterationCallback | None = None,
) -> tuple[np.ndarray, IterationReport]:
    """廣義牛頓法 x⁽ᵏ⁺¹⁾ = (A − D(x⁽ᵏ⁾))⁻¹ b，D = diag(sign(x⁽ᵏ⁾))

    J⁽ᵏ⁾ 以 LinearOperator 形式提供（FFT 矩陣向量乘法減對角縮放），
    內層 Krylov 方法的初始猜測為零向量。
    """
    method = SolverMethod.GN_GMRES if inner is InnerKrylov.GMRES else SolverMethod.GN_TFQMR
    matrix = problem.matrix
    b = problem.rhs
    n = problem.n
    breakdowns = 0

    def step(x: np.ndarray) -> tuple[np.ndarray, int]:
        nonlocal breakdowns
        d = sign_vec(x)

        def jacobian_matvec(v: np.ndarray) -> np.ndarray:
            v = np.ravel(v)
            return fast_matvec(matrix, v) - d * v

        jacobian = LinearOperator((n, n), matvec=jacobian_matvec, dtype=np.complex128)
        if inner is InnerKrylov.GMRES:
            y, report = gmres_restarted(
                jacobian,
                b,
                restart=config.gmres_restart,
                tol=config.inner_krylov_tol,
                maxit=config.krylov_maxit,
            )
        else:
            y, report = tfqmr(
                jacobian, b, tol=config.inner_krylov_tol, maxit=config.krylov_maxit
            )
        if report.breakdown and not report.converged:
            breakdowns += 1
            logger.warning("%s 內層 Krylov breakdown，沿用目前結果", method.value)
        return y, report.iterations

    x, report = _run_outer(problem, config, method, None, step, initial_guess, callback)
    return x, report.model_copy(update={"inner_breakdowns": breakdowns})


class AveSolverEngine:
    """依 SolverConfig.method 分派求解方法"""

    def __init__(self, config: SolverConfig | None = None):
        self.config = config or SolverConfig()

    def resolve_sigma(self, problem: AveProblem) -> float | None:
        return resolve_sigma(problem, self.config)

    def solve(
        self,
        problem: AveProblem,
        *,
        initial_guess: npt.ArrayLike | None = None,
        callback: IterationCallback | None = None,
    ) -> tuple[np.ndarray, IterationReport]:
        """執行設定中的求解方法

        Args:
            problem: AVE 問題
            initial_guess: 初始猜測，預設為零向量
            callback: 每個外迭代後呼叫 callback(k, x)

        Returns:
            (近似解, IterationReport)
        """
        method = self.config.method
        config = self.config
        if method in CSCS_METHODS or method in HSS_METHODS:
            config = config.model_copy(update={"sigma": self.resolve_sigma(problem)})

        kwargs = {"initial_guess": initial_guess, "callback": callback}

        if method is SolverMethod.PICARD_CSCS:
            return picard_cscs(problem, config, **kwargs)
        elif method is SolverMethod.PICARD_CSCS_RU:
            return picard_cscs_residual_update(problem, config, **kwargs)
        elif method is SolverMethod.CSCS_LIKE:
            return cscs_like(problem, config, **kwargs)
        elif method is SolverMethod.CSCS_LIKE_RU:
            return cscs_like_residual_update(problem, config, **kwargs)
        elif method is SolverMethod.PICARD_HSS:
            return picard_hss(problem, config, **kwargs)
        elif method is SolverMethod.HSS_LIKE:
            return hss_like(problem, config, **kwargs)
        elif method is SolverMethod.GN_GMRES:
            return generalized_newton(problem, config, InnerKrylov.GMRES, **kwargs)
        elif method is SolverMethod.GN_TFQMR:
            return generalized_newton(problem, config, InnerKrylov.TFQMR, **kwargs)
        raise ParameterError(f"未知的求解方法: {method}")
