"""資料模型測試"""

from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from ave_toeplitz.config.settings import Settings, settings
from ave_toeplitz.models.experiment import ExperimentSpec, ProblemFamily, ResultRow
from ave_toeplitz.models.problem import AveProblem
from ave_toeplitz.models.report import IterationReport, LinearSolveReport
from ave_toeplitz.models.solver_config import InnerKrylov, SolverConfig, SolverMethod


def _report(**overrides) -> IterationReport:
    values = {
        "method": SolverMethod.CSCS_LIKE,
        "n": 8,
        "sigma": 1.0,
        "outer_tol": 1e-7,
        "it_out": 2,
        "inner_iterations": [1, 1],
        "residual_history": [1.0, 1e-4, 1e-8],
        "converged": True,
    }
    values.update(overrides)
    return IterationReport(**values)


class TestIterationReport:
    """迭代報告測試"""

    def test_summary_fields(self):
        """測試 IT_out、IT_inn、IT"""
        report = _report(method=SolverMethod.PICARD_CSCS, inner_iterations=[5, 3])
        assert report.it_total == 8
        assert report.it_inn_mean == 4.0
        assert report.final_residual == 1e-8
        assert report.to_summary_dict()["method"] == "picard_cscs"
        assert report.inner_breakdowns == 0

    def test_converged_requires_tolerance(self):
        """測試 converged 但最後殘差大於 tol"""
        with pytest.raises(ValidationError):
            _report(residual_history=[1.0, 1e-3, 1e-5])

    def test_inner_iteration_length(self):
        """測試內迭代次數清單長度"""
        with pytest.raises(ValidationError):
            _report(inner_iterations=[1])

    def test_empty_history(self):
        """測試殘差歷史至少含初始殘差"""
        with pytest.raises(ValidationError):
            _report(it_out=0, inner_iterations=[], residual_history=[], converged=False)

    def test_monotone_tail(self):
        """測試尾段容許 10% 的回升"""
        steps = {"it_out": 4, "inner_iterations": [1] * 4}
        assert _report(residual_history=[1.0, 0.5, 0.52, 0.3, 1e-8], **steps).has_monotone_tail()
        assert not _report(residual_history=[1.0, 0.5, 0.7, 0.3, 1e-8], **steps).has_monotone_tail()

    def test_linear_report_tolerance(self):
        """測試線性求解報告的一致性"""
        with pytest.raises(ValidationError):
            LinearSolveReport(iterations=3, relative_residual=0.1, converged=True, tol=1e-6)


class TestSolverConfig:
    """求解器設定測試"""

    def test_defaults(self):
        """測試預設值"""
        config = SolverConfig()
        assert config.outer_tol == 1e-7
        assert config.inner_tol == 0.01
        assert config.sigma is None
        assert config.uses_sigma

    def test_inner_krylov(self):
        """測試廣義牛頓法的內層方法"""
        assert SolverConfig(method=SolverMethod.GN_TFQMR).inner_krylov is InnerKrylov.TFQMR
        assert SolverConfig(method=SolverMethod.GN_GMRES).inner_krylov is InnerKrylov.GMRES
        assert SolverConfig(method=SolverMethod.HSS_LIKE).inner_krylov is None
        assert not SolverConfig(method=SolverMethod.GN_GMRES).uses_sigma

    def test_restart_cap(self):
        """測試 restart 不可大於 Krylov 上限"""
        with pytest.raises(ValidationError):
            SolverConfig(gmres_restart=20, krylov_maxit=10)

    @pytest.mark.parametrize("field", ["outer_tol", "inner_tol", "inner_krylov_tol"])
    def test_tolerance_range(self, field):
        """測試容許誤差必須在 (0, 1)"""
        with pytest.raises(ValidationError):
            SolverConfig(**{field: 1.5})

    def test_non_positive_sigma(self):
        with pytest.raises(ValidationError):
            SolverConfig(sigma=0.0)


class TestExperimentSpec:
    """實驗設定測試"""

    def test_comma_separated_lists(self):
        """測試逗號分隔的 sizes、methods、expect_fail"""
        spec = ExperimentSpec(
            sizes="64, 128,256",
            methods="picard_cscs,gn_gmres",
            expect_fail="gn_gmres",
        )
        assert spec.sizes == [64, 128, 256]
        assert spec.methods == [SolverMethod.PICARD_CSCS, SolverMethod.GN_GMRES]
        assert spec.expect_fail == [SolverMethod.GN_GMRES]
        assert spec.uses_newton

    def test_unknown_method(self):
        """測試未知的方法名稱"""
        with pytest.raises(ValidationError):
            ExperimentSpec(methods="picard_cscs,sor")

    def test_non_positive_size(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(sizes=[64, 0])

    def test_custom_requires_problem_file(self):
        """測試 custom 問題族需要檔案"""
        with pytest.raises(ValidationError):
            ExperimentSpec(family="custom")
        spec = ExperimentSpec(family="custom", problem_file="problem.csv")
        assert spec.family is ProblemFamily.CUSTOM
        assert spec.problem_file == Path("problem.csv")

    def test_defaults(self):
        """測試預設值"""
        spec = ExperimentSpec()
        assert spec.family is ProblemFamily.EXAMPLE1
        assert spec.sizes == [128]
        assert spec.expect_fail == []
        assert not spec.uses_newton

    def test_workers_default_from_settings(self, monkeypatch):
        """測試 workers 預設取自全域設定，明確指定時覆寫"""
        monkeypatch.setattr(settings, "workers", 3)
        assert ExperimentSpec().workers == 3
        assert ExperimentSpec(workers=1).workers == 1


class TestResultRow:
    """結果列測試"""

    def test_status_from_report(self):
        """測試由報告建立的列"""
        assert ResultRow.from_report(_report()).status == "True"
        failed = _report(converged=False, residual_history=[1.0, 0.5, 0.4])
        assert ResultRow.from_report(failed).status == "Fail"

    def test_status_from_error(self):
        """測試錯誤列"""
        row = ResultRow.from_error(SolverMethod.HSS_LIKE, 8192, MemoryError("dense"))
        assert row.status == "Error"
        assert row.error.startswith("MemoryError")
        assert np.isnan(row.final_residual)


class TestAveProblem:
    """AVE 問題模型測試"""

    def test_rhs_dimension(self, random_pd_toeplitz):
        with pytest.raises(ValidationError):
            AveProblem(matrix=random_pd_toeplitz, rhs=np.ones(3))

    def test_wrong_exact_solution(self, random_pd_toeplitz):
        """測試精確解不滿足方程"""
        with pytest.raises(ValidationError):
            AveProblem(matrix=random_pd_toeplitz, rhs=np.ones(16), exact_solution=np.ones(16))

    def test_rhs_is_read_only(self, random_pd_problem):
        with pytest.raises(ValueError):
            random_pd_problem.rhs[0] = 0

    def test_residual_at_solution(self, random_pd_problem):
        assert random_pd_problem.residual_norm(random_pd_problem.exact_solution) < 1e-12


class TestSettings:
    """環境設定測試"""

    def test_defaults(self):
        settings = Settings()
        assert settings.dense_cap == 4096
        assert settings.sigma_search_min < settings.sigma_search_max

    def test_env_override(self, monkeypatch):
        """測試 AVE_ 前綴的環境變數"""
        monkeypatch.setenv("AVE_DENSE_CAP", "128")
        monkeypatch.setenv("AVE_LOG_LEVEL", "debug")
        settings = Settings()
        assert settings.dense_cap == 128
        assert settings.log_level == "DEBUG"

    def test_invalid_search_interval(self):
        with pytest.raises(ValidationError):
            Settings(sigma_search_min=10.0, sigma_search_max=1.0)

    def test_invalid_log_level(self):
        with pytest.raises(ValidationError):
            Settings(log_level="verbose")
