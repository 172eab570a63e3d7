"""Krylov 子空間求解器

重啟 GMRES(m)（修正 Gram-Schmidt + Givens 旋轉）與 TFQMR，
作用在 scipy.sparse.linalg.LinearOperator 上，供廣義牛頓法的內層使用。
"""

import logging

import numpy as np
import numpy.typing as npt
from scipy import linalg
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from ave_toeplitz.config.settings import settings
from ave_toeplitz.exceptions import DimensionError, ParameterError
from ave_toeplitz.models.report import LinearSolveReport

logger = logging.getLogger(__name__)

_HAPPY_BREAKDOWN_TOL = 1e-14


def _prepare(
    operator: LinearOperator | np.ndarray, b: npt.ArrayLike, x0: npt.ArrayLike | None
) -> tuple[LinearOperator, np.ndarray, np.ndarray]:
    op = aslinearoperator(operator)
    rhs = np.asarray(b, dtype=np.complex128).ravel()
    if op.shape != (rhs.size, rhs.size):
        raise DimensionError(f"運算子形狀 {op.shape} 與右端項長度 {rhs.size} 不符")
    x = np.zeros(rhs.size, dtype=np.complex128) if x0 is None else np.array(x0, dtype=np.complex128)
    if x.shape != rhs.shape:
        raise DimensionError("初始猜測長度與右端項不符")
    return op, rhs, x


class RestartedGmres:
    """重啟 GMRES(m)

    iterations 計算的是總 Arnoldi 步數（即矩陣向量乘法次數）。
    """

    def __init__(
        self,
        operator: LinearOperator | np.ndarray,
        *,
        restart: int = 20,
        tol: float = 1e-6,
        maxiter: int = 1000,
        reorth_threshold: float | None = None,
    ):
        if restart < 1:
            raise ParameterError(f"restart 至少為 1，實際為 {restart}")
        if maxiter < 1:
            raise ParameterError(f"maxiter 至少為 1，實際為 {maxiter}")
        self._A = aslinearoperator(operator)
        self.restart = restart
        self.tol = tol
        self.maxiter = maxiter
        self.reorth_threshold = (
            settings.reorth_threshold if reorth_threshold is None else reorth_threshold
        )

    def solve(
        self, b: npt.ArrayLike, x0: npt.ArrayLike | None = None
    ) -> tuple[np.ndarray, LinearSolveReport]:
        A, rhs, x = _prepare(self._A, b, x0)
        n = rhs.size
        b_norm = float(np.linalg.norm(rhs))
        if b_norm == 0:
            return np.zeros(n, dtype=np.complex128), self._report(0, 0.0, [0.0])

        r = rhs - A.matvec(x)
        beta = float(np.linalg.norm(r))
        history = [beta / b_norm]
        total = 0
        m = min(self.restart, n)
        broke_down = False

        while history[-1] > self.tol and total < self.maxiter:
            Q = np.zeros((n, m + 1), dtype=np.complex128)
            H = np.zeros((m + 1, m), dtype=np.complex128)
            cn = np.zeros(m)
            sn = np.zeros(m, dtype=np.complex128)
            g = np.zeros(m + 1, dtype=np.complex128)
            g[0] = beta
            Q[:, 0] = r / beta

            k = 0
            breakdown = False
            while k < m and total < self.maxiter:
                breakdown = self._arnoldi(k, Q, H)
                total += 1
                self._apply_givens_rotation(k, H, cn, sn)
                g[k + 1] = -np.conj(sn[k]) * g[k]
                g[k] = cn[k] * g[k]
                k += 1
                if breakdown or abs(g[k]) / b_norm <= self.tol:
                    break
            broke_down = broke_down or breakdown

            upper = H[:k, :k]
            if np.min(np.abs(np.diag(upper))) > 0:
                y = linalg.solve_triangular(upper, g[:k])
            else:
                # 奇異的 Hessenberg 因子，改用最小平方解
                y = linalg.lstsq(upper, g[:k])[0]
            x = x + Q[:, :k] @ y
            r = rhs - A.matvec(x)
            beta = float(np.linalg.norm(r))
            history.append(beta / b_norm)

            if breakdown or beta == 0:
                break

        if broke_down and history[-1] > self.tol:
            logger.warning("GMRES 在第 %d 步 breakdown 但未達門檻 (殘差 %.3e)", total, history[-1])
        return x, self._report(total, history[-1], history, breakdown=broke_down)

    def _arnoldi(self, k: int, Q: np.ndarray, H: np.ndarray) -> bool:
        """擴充第 k+1 個基底向量；回傳是否發生 happy breakdown"""
        w = self._A.matvec(Q[:, k])
        for i in range(k + 1):  # 修正 Gram-Schmidt
            H[i, k] = np.vdot(Q[:, i], w)
            w = w - H[i, k] * Q[:, i]

        w_norm = float(np.linalg.norm(w))
        if w_norm > 0:
            overlap = Q[:, : k + 1].conj().T @ w
            if np.max(np.abs(overlap)) / w_norm > self.reorth_threshold:
                H[: k + 1, k] += overlap
                w = w - Q[:, : k + 1] @ overlap
                w_norm = float(np.linalg.norm(w))

        H[k + 1, k] = w_norm
        if w_norm <= _HAPPY_BREAKDOWN_TOL * max(1.0, float(np.linalg.norm(H[: k + 1, k]))):
            return True
        Q[:, k + 1] = w / w_norm
        return False

    @staticmethod
    def _apply_givens_rotation(
        k: int, H: np.ndarray, cn: np.ndarray, sn: np.ndarray
    ) -> None:
        for i in range(k):
            upper = cn[i] * H[i, k] + sn[i] * H[i + 1, k]
            H[i + 1, k] = -np.conj(sn[i]) * H[i, k] + cn[i] * H[i + 1, k]
            H[i, k] = upper

        a, b = H[k, k], H[k + 1, k]
        mod = float(np.hypot(abs(a), abs(b)))
        if abs(a) == 0:
            cn[k], sn[k] = 0.0, 1.0
            H[k, k] = b
        else:
            phase = a / abs(a)
            cn[k] = abs(a) / mod
            sn[k] = phase * np.conj(b) / mod
            H[k, k] = phase * mod
        H[k + 1, k] = 0.0

    def _report(
        self, iterations: int, residual: float, history: list[float], *, breakdown: bool = False
    ) -> LinearSolveReport:
        return LinearSolveReport(
            iterations=iterations,
            relative_residual=residual,
            converged=bool(residual <= self.tol),
            tol=self.tol,
            breakdown=breakdown,
            residual_history=history,
        )


class Tfqmr:
    """Transpose-free QMR

    每次迭代為一個半步（兩個半步共用一次 α），停止準則以
    τ·√(k+1) 估計殘差，再以真實殘差確認。
    """

    def __init__(
        self,
        operator: LinearOperator | np.ndarray,
        *,
        tol: float = 1e-6,
        maxiter: int = 1000,
    ):
        if maxiter < 1:
            raise ParameterError(f"maxiter 至少為 1，實際為 {maxiter}")
        self._A = aslinearoperator(operator)
        self.tol = tol
        self.maxiter = maxiter

    def solve(
        self, b: npt.ArrayLike, x0: npt.ArrayLike | None = None
    ) -> tuple[np.ndarray, LinearSolveReport]:
        A, rhs, x = _prepare(self._A, b, x0)
        b_norm = float(np.linalg.norm(rhs))
        if b_norm == 0:
            zero = np.zeros(rhs.size, dtype=np.complex128)
            return zero, self._report(0, 0.0, [0.0], breakdown=False)

        r = rhs - A.matvec(x)
        history = [float(np.linalg.norm(r)) / b_norm]
        if history[-1] <= self.tol:
            return x, self._report(0, history[-1], history, breakdown=False)

        u = r.copy()
        w = r.copy()
        r_star = r.copy()
        u_hat = A.matvec(r)
        v = u_hat.copy()
        d = np.zeros_like(r)
        theta = 0.0
        eta: complex = 0.0
        rho = np.vdot(r_star, r)
        rho_last = rho
        tau = float(np.linalg.norm(r))
        alpha: complex = 0.0
        u_next = u
        breakdown = False
        iterations = 0

        for k in range(self.maxiter):
            even = k % 2 == 0
            if even:
                v_dot = np.vdot(r_star, v)
                if v_dot == 0:
                    breakdown = True
                    break
                alpha = rho / v_dot
                u_next = u - alpha * v

            w = w - alpha * u_hat
            d = u + (theta**2 / alpha) * eta * d
            theta = float(np.linalg.norm(w)) / tau
            c = 1 / np.sqrt(1 + theta**2)
            tau *= theta * c
            eta = c**2 * alpha
            x = x + eta * d
            iterations = k + 1

            if tau * np.sqrt(k + 1) <= self.tol * b_norm:
                true_residual = float(np.linalg.norm(rhs - A.matvec(x))) / b_norm
                history.append(true_residual)
                if true_residual <= self.tol:
                    break

            if tau == 0:
                breakdown = True
                break

            if not even:
                rho = np.vdot(r_star, w)
                if rho_last == 0:
                    breakdown = True
                    break
                beta = rho / rho_last
                u = w + beta * u
                v = beta * u_hat + beta**2 * v
                u_hat = A.matvec(u)
                v = v + u_hat
            else:
                u_hat = A.matvec(u_next)
                u = u_next
                rho_last = rho

        residual = float(np.linalg.norm(rhs - A.matvec(x))) / b_norm
        if history[-1] != residual:
            history.append(residual)
        if breakdown:
            logger.warning("TFQMR 在第 %d 步發生 breakdown (殘差 %.3e)", iterations, residual)
        return x, self._report(iterations, residual, history, breakdown=breakdown)

    def _report(
        self, iterations: int, residual: float, history: list[float], *, breakdown: bool
    ) -> LinearSolveReport:
        return LinearSolveReport(
            iterations=iterations,
            relative_residual=residual,
            converged=bool(residual <= self.tol),
            tol=self.tol,
            breakdown=breakdown,
            residual_history=history,
        )


def gmres_restarted(
    operator: LinearOperator | np.ndarray,
    b: npt.ArrayLike,
    restart: int = 20,
    tol: float = 1e-6,
    maxit: int = 1000,
    x0: npt.ArrayLike | None = None,
) -> tuple[np.ndarray, LinearSolveReport]:
    """重啟 GMRES(m) 解 Ax = b"""
    return RestartedGmres(operator, restart=restart, tol=tol, maxiter=maxit).solve(b, x0)


def tfqmr(
    operator: LinearOperator | np.ndarray,
    b: npt.ArrayLike,
    tol: float = 1e-6,
    maxit: int = 1000,
    x0: npt.ArrayLike | None = None,
) -> tuple[np.ndarray, LinearSolveReport]:
    """TFQMR 解 Ax = b"""
    return Tfqmr(operator, tol=tol, maxiter=maxit).solve(b, x0)
