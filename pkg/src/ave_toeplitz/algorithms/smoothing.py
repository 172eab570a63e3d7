"""平滑化診斷

φ(x) = μ·ln(e^{x/μ} + e^{−x/μ}) 是 |x| 的一致平滑近似，
本模組計算 φ、其 Jacobian，以及非線性 CSCS-like 迭代在解附近的
收斂量（譜半徑、ξ、δ、μ 門檻）。這些量只做數值檢查，求解器本身不使用 φ。
"""

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, Field
from scipy import linalg

from ave_toeplitz.algorithms.linear_solvers import dense_cscs_factors, spectral_radius
from ave_toeplitz.algorithms.splittings import Splitting
from ave_toeplitz.algorithms.toeplitz_core import (
    circulant_spectrum,
    cscs_split,
    shifted_spectrum,
    skew_circulant_spectrum,
)
from ave_toeplitz.models.toeplitz import ToeplitzMatrix
from ave_toeplitz.utils.validators import VectorValidator

_BELOW_ONE = np.nextafter(1.0, 0.0)


class SmoothingParams(BaseModel):
    """平滑參數 μ"""

    mu: float = Field(gt=0)


class AttractionDiagnostics(BaseModel):
    """解附近的收斂量"""

    spectral_radius: float  # ρ(M(σ, x*))
    xi: float  # max(‖(σI−C)(σI+C)⁻¹‖, ‖(σI−S)(σI+S)⁻¹‖)
    delta: float  # max(‖(σI+C)⁻¹‖, ‖(σI+S)⁻¹‖)
    delta_with_jacobian: float  # max(‖D(σI+C)⁻¹‖, ‖D(σI+S)⁻¹‖)

    @property
    def bound(self) -> float:
        """(ξ + δ)²"""
        return (self.xi + self.delta) ** 2

    @property
    def bound_guaranteed(self) -> bool:
        """δ < 1 − ξ 時 (ξ + δ)² < 1"""
        return self.delta < 1 - self.xi


def phi(x: npt.ArrayLike, mu: float) -> np.ndarray:
    """φ(x) = μ·logaddexp(x/μ, −x/μ)，避免 exp 溢位"""
    mu = VectorValidator.ensure_positive(mu, "μ")
    values = VectorValidator.ensure_real_vector(x)
    return mu * np.logaddexp(values / mu, -values / mu)


def phi_jacobian(x: npt.ArrayLike, mu: float) -> np.ndarray:
    """φ 的對角 Jacobian tanh(x/μ)，嚴格落在 (−1, 1)"""
    mu = VectorValidator.ensure_positive(mu, "μ")
    values = VectorValidator.ensure_real_vector(x)
    return np.clip(np.tanh(values / mu), -_BELOW_ONE, _BELOW_ONE)


def smoothing_gap(x: npt.ArrayLike, mu: float) -> tuple[float, float]:
    """(‖φ(x) − |x|‖₂, √n·ln2·μ)"""
    values = VectorValidator.ensure_real_vector(x)
    gap = float(np.linalg.norm(phi(values, mu) - np.abs(values)))
    bound = float(np.sqrt(values.size) * np.log(2.0) * mu)
    return gap, bound


def _modulus_phi(x: np.ndarray, mu: float) -> np.ndarray:
    return phi(np.abs(x), mu)


def theta_map(splitting: Splitting, b: npt.ArrayLike, x: npt.ArrayLike) -> np.ndarray:
    """Θ = V∘U，即一次非線性 CSCS-like 掃描"""
    rhs = np.asarray(b, dtype=np.complex128)
    vec = np.asarray(x, dtype=np.complex128)
    sigma = splitting.sigma
    half = splitting.solve_first(sigma * vec - splitting.apply_second(vec) + np.abs(vec) + rhs)
    return splitting.solve_second(sigma * half - splitting.apply_first(half) + np.abs(half) + rhs)


def smoothed_theta_map(
    splitting: Splitting, b: npt.ArrayLike, x: npt.ArrayLike, mu: float
) -> np.ndarray:
    """Θ̄：以 φ(|·|) 取代 |·| 的 Θ"""
    rhs = np.asarray(b, dtype=np.complex128)
    vec = np.asarray(x, dtype=np.complex128)
    sigma = splitting.sigma
    half = splitting.solve_first(
        sigma * vec - splitting.apply_second(vec) + _modulus_phi(vec, mu) + rhs
    )
    return splitting.solve_second(
        sigma * half - splitting.apply_first(half) + _modulus_phi(half, mu) + rhs
    )


def attraction_diagnostics(
    matrix: ToeplitzMatrix,
    sigma: float,
    x_star: npt.ArrayLike,
    mu: float,
    dense_cap: int | None = None,
) -> AttractionDiagnostics:
    """計算 M(σ, x*) = (σI+S)⁻¹(σI−C+D)(σI+C)⁻¹(σI−S+D) 的譜半徑與 ξ、δ"""
    sigma = VectorValidator.ensure_positive(sigma, "σ")
    d = np.diag(phi_jacobian(x_star, mu))
    circ, skew = dense_cscs_factors(matrix, dense_cap)
    n = matrix.n
    shift = sigma * np.eye(n)

    inverse_c = linalg.solve(shift + circ, np.eye(n))
    inverse_s = linalg.solve(shift + skew, np.eye(n))
    iteration = inverse_s @ (shift - circ + d) @ inverse_c @ (shift - skew + d)

    c, s = cscs_split(matrix)
    lambda_c = circulant_spectrum(c).lambdas
    lambda_s = skew_circulant_spectrum(s).lambdas
    shifted_c = shifted_spectrum(sigma, lambda_c, None)
    shifted_s = shifted_spectrum(sigma, lambda_s, None)

    # C、S 為正規矩陣，範數可直接由譜計算
    xi = max(
        float(np.max(np.abs((sigma - lambda_c) / shifted_c))),
        float(np.max(np.abs((sigma - lambda_s) / shifted_s))),
    )
    delta = max(float(np.max(1 / np.abs(shifted_c))), float(np.max(1 / np.abs(shifted_s))))
    delta_with_jacobian = max(
        float(np.linalg.norm(d @ inverse_c, 2)), float(np.linalg.norm(d @ inverse_s, 2))
    )
    return AttractionDiagnostics(
        spectral_radius=spectral_radius(iteration),
        xi=xi,
        delta=delta,
        delta_with_jacobian=delta_with_jacobian,
    )


def attraction_spectral_radius(
    matrix: ToeplitzMatrix,
    sigma: float,
    x_star: npt.ArrayLike,
    mu: float,
    dense_cap: int | None = None,
) -> float:
    """ρ(M(σ, x*))"""
    return attraction_diagnostics(matrix, sigma, x_star, mu, dense_cap).spectral_radius


def mu_threshold(
    matrix: ToeplitzMatrix,
    sigma: float,
    epsilon: float,
    *,
    rigorous: bool = False,
) -> float:
    """μ 的上限，使 ‖Θ(x) − Θ̄(x)‖ ≤ ε

    預設公式為 ‖σI+S‖ε / ((2 + ‖(σI+C)⁻¹‖)·√n·ln2)。
    rigorous=True 時以 1/‖(σI+S)⁻¹‖ 取代 ‖σI+S‖，在 C 正定時
    可由三角不等式直接推得 ‖Θ − Θ̄‖ ≤ ε。
    """
    sigma = VectorValidator.ensure_positive(sigma, "σ")
    epsilon = VectorValidator.ensure_positive(epsilon, "ε")
    c, s = cscs_split(matrix)
    shifted_c = np.abs(shifted_spectrum(sigma, circulant_spectrum(c).lambdas, None))
    shifted_s = np.abs(shifted_spectrum(sigma, skew_circulant_spectrum(s).lambdas, None))

    numerator = float(np.min(shifted_s) if rigorous else np.max(shifted_s)) * epsilon
    inverse_c_norm = float(1 / np.min(shifted_c))
    denominator = (2 + inverse_c_norm) * np.sqrt(matrix.n) * np.log(2.0)
    return numerator / denominator


def theta_lipschitz_bounds(matrix: ToeplitzMatrix, sigma: float) -> tuple[float, float]:
    """(‖(σI+S)⁻¹‖(‖σI−C‖+1), ‖(σI+C)⁻¹‖(‖σI−S‖+1))"""
    sigma = VectorValidator.ensure_positive(sigma, "σ")
    c, s = cscs_split(matrix)
    lambda_c = circulant_spectrum(c).lambdas
    lambda_s = skew_circulant_spectrum(s).lambdas
    inverse_s = float(1 / np.min(np.abs(shifted_spectrum(sigma, lambda_s, None))))
    inverse_c = float(1 / np.min(np.abs(shifted_spectrum(sigma, lambda_c, None))))
    return (
        inverse_s * (float(np.max(np.abs(sigma - lambda_c))) + 1),
        inverse_c * (float(np.max(np.abs(sigma - lambda_s))) + 1),
    )
