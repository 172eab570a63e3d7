"""基準實驗執行器

對每個 (n, 方法) 組合建立問題、決定 σ、求解並記錄結果列。
個別列失敗時記錄為錯誤列，其餘列照常執行。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ave_toeplitz.algorithms.ave_solvers import AveSolverEngine
from ave_toeplitz.exceptions import AveToeplitzError, SpecError
from ave_toeplitz.exporters.csv_exporter import CSVExporter
from ave_toeplitz.importers.csv_importer import load_custom_problem
from ave_toeplitz.models.experiment import ExperimentSpec, ProblemFamily, ResultRow
from ave_toeplitz.models.problem import AveProblem
from ave_toeplitz.models.problem_params import Example1Params, Example2Params
from ave_toeplitz.models.report import IterationReport
from ave_toeplitz.models.solver_config import HSS_METHODS, SolverConfig, SolverMethod
from ave_toeplitz.problems.examples import build_example1_problem, build_example2_problem

logger = logging.getLogger(__name__)

# 問題建構與求解過程中可預期的錯誤
_ROW_ERRORS = (AveToeplitzError, ValueError, ArithmeticError, MemoryError)


@dataclass
class _RowTask:
    n: int
    method: SolverMethod
    problem: AveProblem | None
    error: Exception | None = None


class BenchmarkRunner:
    """依 ExperimentSpec 執行一組實驗"""

    def __init__(self, spec: ExperimentSpec):
        self.spec = spec
        self.reports: list[IterationReport] = []

    def build_problem(self, n: int) -> AveProblem:
        """建立指定維度的問題"""
        spec = self.spec
        if spec.family is ProblemFamily.EXAMPLE1:
            if n < 3:
                return build_example1_problem(n, gamma=spec.gamma, c=spec.c, d=spec.d)
            params = Example1Params(n=n, gamma=spec.gamma, c=spec.c, d=spec.d)
            return build_example1_problem(params)
        if spec.family is ProblemFamily.EXAMPLE2:
            params = Example2Params(
                n=n, alpha=spec.alpha, d_plus=spec.d_plus, d_minus=spec.d_minus
            )
            return build_example2_problem(params)
        return load_custom_problem(spec.problem_file)

    def solver_config(self, method: SolverMethod) -> SolverConfig:
        """單一方法的求解器設定；HSS 方法優先使用 sigma_hss"""
        spec = self.spec
        sigma = spec.sigma
        if method in HSS_METHODS and spec.sigma_hss is not None:
            sigma = spec.sigma_hss
        return SolverConfig(
            method=method,
            sigma=sigma,
            outer_tol=spec.outer_tol,
            outer_maxit=spec.outer_maxit,
            inner_tol=spec.inner_tol,
            inner_maxit=spec.inner_maxit,
            gmres_restart=spec.gmres_restart,
            inner_krylov_tol=spec.inner_krylov_tol,
            krylov_maxit=spec.krylov_maxit,
        )

    def _tasks(self) -> list[_RowTask]:
        spec = self.spec
        sizes = spec.sizes
        if spec.family is ProblemFamily.CUSTOM:
            sizes = sizes[:1]

        tasks = []
        for n in sizes:
            try:
                problem = self.build_problem(n)
                error = None
            except SpecError:
                raise
            except _ROW_ERRORS as e:
                logger.error("n=%d 的問題建構失敗: %s", n, e)
                problem, error = None, e
            for method in spec.methods:
                size = problem.n if problem is not None else n
                tasks.append(_RowTask(size, method, problem, error))
        return tasks

    def _run_task(self, task: _RowTask) -> tuple[ResultRow, IterationReport | None]:
        if task.problem is None:
            return ResultRow.from_error(task.method, task.n, task.error), None
        try:
            engine = AveSolverEngine(self.solver_config(task.method))
            _, report = engine.solve(task.problem)
        except _ROW_ERRORS as e:
            logger.error("%s n=%d 執行失敗: %s", task.method.value, task.n, e)
            return ResultRow.from_error(task.method, task.n, e), None
        return ResultRow.from_report(report), report

    def run(self) -> list[ResultRow]:
        """執行全部 (n, 方法) 組合，輸出順序與設定一致"""
        tasks = self._tasks()
        logger.info("開始執行 %d 個實驗列 (workers=%d)", len(tasks), self.spec.workers)

        if self.spec.workers > 1:
            with ThreadPoolExecutor(max_workers=self.spec.workers) as pool:
                outcomes = list(pool.map(self._run_task, tasks))
        else:
            outcomes = [self._run_task(task) for task in tasks]

        rows = []
        self.reports = []
        for row, report in outcomes:
            rows.append(row)
            if report is not None:
                self.reports.append(report)
                if self.spec.history_dir is not None:
                    path = self.spec.history_dir / CSVExporter.history_filename(report)
                    CSVExporter.export_history(report, path)
        return rows


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """執行實驗並回傳結果列（若設定 history_dir 會一併寫出收斂歷史）"""
    return BenchmarkRunner(spec).run()


def exit_code_for(rows: list[ResultRow], spec: ExperimentSpec) -> int:
    """全部收斂或屬於預期失敗時為 0，否則為 1"""
    for row in rows:
        if row.error is not None:
            return 1
        if not row.converged and row.method not in spec.expect_fail:
            return 1
    return 0
