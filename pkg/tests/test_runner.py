"""基準實驗執行器測試"""

import pandas as pd
import pytest

from ave_toeplitz.benchmark.runner import BenchmarkRunner, exit_code_for, run_experiment
from ave_toeplitz.config.settings import settings
from ave_toeplitz.exceptions import SpecError
from ave_toeplitz.models.experiment import ExperimentSpec, ResultRow
from ave_toeplitz.models.solver_config import SolverMethod
from ave_toeplitz.problems.examples import exact_solution


class TestBenchmarkRunner:
    """執行器測試"""

    def test_rows_follow_spec_order(self):
        """測試結果列依 (n, 方法) 順序排列"""
        spec = ExperimentSpec(sizes=[16, 32], methods="cscs_like,picard_cscs")
        rows = run_experiment(spec)

        assert [(row.n, row.method) for row in rows] == [
            (16, SolverMethod.CSCS_LIKE),
            (16, SolverMethod.PICARD_CSCS),
            (32, SolverMethod.CSCS_LIKE),
            (32, SolverMethod.PICARD_CSCS),
        ]
        assert all(row.status == "True" for row in rows)
        assert exit_code_for(rows, spec) == 0

    def test_parallel_matches_serial(self):
        """測試多執行緒時順序與數值不變"""
        serial = run_experiment(ExperimentSpec(sizes=[16, 24], methods="cscs_like,cscs_like_ru"))
        parallel = run_experiment(
            ExperimentSpec(sizes=[16, 24], methods="cscs_like,cscs_like_ru", workers=3)
        )
        assert [(row.n, row.method, row.it_out) for row in serial] == [
            (row.n, row.method, row.it_out) for row in parallel
        ]

    def test_sigma_override(self):
        """測試固定 σ 與 HSS 專用 σ"""
        runner = BenchmarkRunner(ExperimentSpec(sigma=1.5, sigma_hss=3.0))
        assert runner.solver_config(SolverMethod.CSCS_LIKE).sigma == 1.5
        assert runner.solver_config(SolverMethod.PICARD_HSS).sigma == 3.0
        assert runner.solver_config(SolverMethod.HSS_LIKE).sigma == 3.0

    def test_example2_problem(self):
        """測試分數階問題族"""
        runner = BenchmarkRunner(ExperimentSpec(family="example2", alpha=1.2))
        problem = runner.build_problem(16)
        assert problem.n == 16
        assert "α=1.2" in problem.label

    def test_small_example1(self):
        """測試 n < 3 使用左上區塊"""
        problem = BenchmarkRunner(ExperimentSpec()).build_problem(2)
        assert problem.n == 2

    def test_dense_cap_becomes_error_row(self, monkeypatch):
        """測試稠密上限錯誤只影響該列"""
        monkeypatch.setattr(settings, "dense_cap", 8)
        spec = ExperimentSpec(sizes=[16], methods="cscs_like,picard_hss")
        rows = run_experiment(spec)

        assert [row.status for row in rows] == ["True", "Error"]
        assert "DenseCapError" in rows[1].error
        assert exit_code_for(rows, spec) == 1

    def test_history_files(self, temp_output_dir):
        """測試收斂歷史檔案"""
        history_dir = temp_output_dir / "history"
        spec = ExperimentSpec(sizes=[16], methods="cscs_like", history_dir=history_dir)
        runner = BenchmarkRunner(spec)
        runner.run()

        history = pd.read_csv(history_dir / "cscs_like_n16.csv")
        report = runner.reports[0]
        assert list(history.columns) == ["k", "relative_residual"]
        assert len(history) == report.it_out + 1
        last = history["relative_residual"].iloc[-1]
        assert last == pytest.approx(report.final_residual, rel=1e-5)

    def test_custom_family_uses_file_size(self, random_pd_toeplitz, temp_output_dir):
        """測試 custom 問題族只執行一次且 n 取自檔案"""
        x_star = exact_solution(16)
        path = temp_output_dir / "problem.csv"
        pd.DataFrame(
            {
                "first_col_re": random_pd_toeplitz.first_col.real,
                "first_col_im": random_pd_toeplitz.first_col.imag,
                "first_row_re": random_pd_toeplitz.first_row.real,
                "first_row_im": random_pd_toeplitz.first_row.imag,
                "x_re": x_star.real,
                "x_im": x_star.imag,
            }
        ).to_csv(path, index=False)

        spec = ExperimentSpec(
            family="custom", problem_file=path, sizes=[64, 128], methods="picard_cscs", sigma=5.0
        )
        rows = run_experiment(spec)

        assert len(rows) == 1
        assert rows[0].n == 16
        assert rows[0].status == "True"

    def test_missing_problem_file(self, temp_output_dir):
        """測試問題檔案不存在時拋出 SpecError"""
        spec = ExperimentSpec(family="custom", problem_file=temp_output_dir / "missing.csv")
        with pytest.raises(SpecError):
            run_experiment(spec)


class TestExitCode:
    """結束代碼測試"""

    def test_expected_failure(self):
        """測試預期失敗的方法不影響結束代碼"""
        failed = ResultRow(method=SolverMethod.GN_GMRES, n=64)
        converged = ResultRow(method=SolverMethod.CSCS_LIKE, n=64, converged=True)
        spec = ExperimentSpec(expect_fail="gn_gmres")

        assert exit_code_for([converged, failed], spec) == 0
        assert exit_code_for([converged, failed], ExperimentSpec()) == 1

    def test_error_row_is_never_expected(self):
        """測試錯誤列一律回傳 1"""
        row = ResultRow.from_error(SolverMethod.GN_GMRES, 64, MemoryError())
        assert exit_code_for([row], ExperimentSpec(expect_fail="gn_gmres")) == 1
