import logging
from pathlib import Path
from typing import Any

import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .algorithms.linear_solvers import (
    cscs_solve,
    iteration_matrix_dense,
    picard_inner_sweep_requirement,
    spectral_radius,
)
from .algorithms.parameter_select import convergence_factor_bound, sigma_cscs_opt, sigma_hss_opt
from .algorithms.smoothing import (
    SmoothingParams,
    attraction_diagnostics,
    mu_threshold,
    theta_lipschitz_bounds,
)
from .algorithms.toeplitz_core import circulant_spectrum, cscs_split, skew_circulant_spectrum
from .benchmark.runner import BenchmarkRunner, exit_code_for
from .config.settings import settings
from .exceptions import AveToeplitzError, SpecError
from .exporters.csv_exporter import CSVExporter
from .importers.config_loader import load_experiment_config
from .models.experiment import FAMILY_DESCRIPTIONS, ExperimentSpec, ProblemFamily, ResultRow
from .models.solver_config import METHOD_DESCRIPTIONS, SolverMethod

app = typer.Typer(help="Toeplitz 絕對值方程 Ax − |x| = b 的 CSCS 型求解器與基準實驗")
console = Console()

EXIT_SPEC_ERROR = 2


def setup_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper())
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True)],
        force=True,
    )


def build_spec(config_file: Path | None, overrides: dict[str, Any]) -> ExperimentSpec:
    """設定檔為基礎，命令列旗標覆寫；錯誤時以代碼 2 結束"""
    try:
        values = load_experiment_config(config_file) if config_file else {}
        values.update({key: value for key, value in overrides.items() if value is not None})
        return ExperimentSpec(**values)
    except (ValidationError, SpecError) as e:
        console.print(f"❌ 實驗設定錯誤:\n{e}")
        raise typer.Exit(EXIT_SPEC_ERROR) from e


def _fmt(value: float | None, spec: str = ".4g") -> str:
    return "-" if value is None else format(value, spec)


def display_results(rows: list[ResultRow]):
    """以表格顯示實驗結果"""
    table = Table(title="AVE 求解結果")
    table.add_column("方法", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("σ", justify="right")
    table.add_column("IT_out", justify="right")
    table.add_column("IT_inn", justify="right")
    table.add_column("IT", justify="right")
    table.add_column("收斂", justify="center")
    table.add_column("殘差", justify="right")
    table.add_column("秒", justify="right")

    for row in rows:
        status = {"True": "[green]True[/green]", "Fail": "[yellow]Fail[/yellow]"}.get(
            row.status, "[red]Error[/red]"
        )
        table.add_row(
            row.method.value,
            str(row.n),
            _fmt(row.sigma),
            str(row.it_out),
            f"{row.it_inn_mean:.2f}",
            str(row.it_total),
            status,
            _fmt(row.final_residual, ".2e"),
            f"{row.wall_seconds:.3f}",
        )

    console.print(table)

    for row in rows:
        if row.error:
            console.print(f"   ⚠️ {row.method.value} n={row.n}: {row.error}")


@app.command()
def run(
    config: Path | None = typer.Option(None, "--config", help="TOML 實驗設定檔"),
    family: ProblemFamily | None = typer.Option(None, help="問題族"),
    gamma: float | None = typer.Option(None, help="Example 1 的 γ"),
    c: float | None = typer.Option(None, "--c", help="Example 1 的 c"),
    d: float | None = typer.Option(None, "--d", help="Example 1 的 d"),
    alpha: float | None = typer.Option(None, help="Example 2 的分數階 α ∈ (1, 2)"),
    dplus: float | None = typer.Option(None, "--dplus", help="Example 2 的 d₊"),
    dminus: float | None = typer.Option(None, "--dminus", help="Example 2 的 d₋"),
    problem_file: Path | None = typer.Option(None, help="custom 問題族的 CSV 檔案"),
    sizes: str | None = typer.Option(None, help="以逗號分隔的維度，例如 128,256"),
    methods: str | None = typer.Option(None, help="以逗號分隔的方法名稱"),
    sigma: float | None = typer.Option(None, help="固定 σ（預設自動選取）"),
    sigma_hss: float | None = typer.Option(None, help="HSS 方法專用的固定 σ"),
    outer_tol: float | None = typer.Option(None, help="外迭代相對殘差門檻"),
    outer_maxit: int | None = typer.Option(None, help="外迭代上限"),
    inner_tol: float | None = typer.Option(None, help="Picard 內掃描門檻 η"),
    inner_maxit: int | None = typer.Option(None, help="Picard 內掃描上限"),
    gmres_restart: int | None = typer.Option(None, help="GMRES 重啟長度 m"),
    inner_krylov_tol: float | None = typer.Option(None, help="牛頓法內層 Krylov 門檻"),
    out: Path | None = typer.Option(None, help="結果 CSV 輸出路徑"),
    history_dir: Path | None = typer.Option(None, help="收斂歷史 CSV 輸出目錄"),
    workers: int | None = typer.Option(None, help="平行執行緒數"),
    expect_fail: str | None = typer.Option(None, help="預期會 Fail 的方法，以逗號分隔"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="輸出每步殘差"),
):
    """執行基準實驗"""
    setup_logging(verbose)

    spec = build_spec(
        config,
        {
            "family": family,
            "gamma": gamma,
            "c": c,
            "d": d,
            "alpha": alpha,
            "d_plus": dplus,
            "d_minus": dminus,
            "problem_file": problem_file,
            "sizes": sizes,
            "methods": methods,
            "sigma": sigma,
            "sigma_hss": sigma_hss,
            "outer_tol": outer_tol,
            "outer_maxit": outer_maxit,
            "inner_tol": inner_tol,
            "inner_maxit": inner_maxit,
            "gmres_restart": gmres_restart,
            "inner_krylov_tol": inner_krylov_tol,
            "out": out,
            "history_dir": history_dir,
            "workers": workers,
            "expect_fail": expect_fail,
        },
    )

    console.print(f"🧮 問題族: {spec.family.value}，維度: {', '.join(map(str, spec.sizes))}")
    console.print(f"🔧 方法: {', '.join(method.value for method in spec.methods)}")

    try:
        rows = BenchmarkRunner(spec).run()
    except SpecError as e:
        console.print(f"❌ 問題檔案錯誤: {e}")
        raise typer.Exit(EXIT_SPEC_ERROR) from e
    except AveToeplitzError as e:
        console.print(f"❌ 實驗執行失敗: {e}")
        raise typer.Exit(1) from e
    display_results(rows)

    if spec.out is not None:
        try:
            path = CSVExporter.export_results(rows, spec.out)
            console.print(f"✅ 結果已寫入: {path}")
        except AveToeplitzError as e:
            console.print(f"❌ {e}")
            raise typer.Exit(1) from e
    if spec.history_dir is not None:
        console.print(f"📈 收斂歷史目錄: {spec.history_dir}")

    code = exit_code_for(rows, spec)
    if code:
        console.print("❌ 有方法未預期地失敗")
    raise typer.Exit(code)


@app.command()
def params(
    family: ProblemFamily = typer.Option(ProblemFamily.EXAMPLE1, help="問題族"),
    sizes: str = typer.Option("32,64,128", help="以逗號分隔的維度"),
    gamma: float = typer.Option(10.0, help="Example 1 的 γ"),
    c: float = typer.Option(2.0, "--c", help="Example 1 的 c"),
    d: float = typer.Option(3.0, "--d", help="Example 1 的 d"),
    alpha: float = typer.Option(1.5, help="Example 2 的 α"),
    dplus: float = typer.Option(0.6, "--dplus", help="Example 2 的 d₊"),
    dminus: float = typer.Option(0.4, "--dminus", help="Example 2 的 d₋"),
    problem_file: Path | None = typer.Option(None, help="custom 問題族的 CSV 檔案"),
):
    """列出各維度的 σ_CSCS、f(σ_CSCS) 與 σ_HSS"""
    setup_logging()
    spec = build_spec(
        None,
        {
            "family": family,
            "sizes": sizes,
            "gamma": gamma,
            "c": c,
            "d": d,
            "alpha": alpha,
            "d_plus": dplus,
            "d_minus": dminus,
            "problem_file": problem_file,
        },
    )
    runner = BenchmarkRunner(spec)

    table = Table(title=f"{spec.family.value} 最佳參數")
    table.add_column("n", justify="right")
    table.add_column("σ_CSCS", justify="right")
    table.add_column("f(σ_CSCS)", justify="right")
    table.add_column("σ_HSS", justify="right")

    for n in spec.sizes:
        try:
            problem = runner.build_problem(n)
            c_vec, s_vec = cscs_split(problem.matrix)
            circulant = circulant_spectrum(c_vec)
            skew = skew_circulant_spectrum(s_vec)
            sigma_cscs = sigma_cscs_opt(circulant, skew)
            factor = convergence_factor_bound(sigma_cscs, circulant, skew)
        except AveToeplitzError as e:
            console.print(f"⚠️ n={n}: {e}")
            continue

        try:
            sigma_hss: float | None = sigma_hss_opt(problem.matrix)
        except AveToeplitzError as e:
            logging.getLogger(__name__).warning(f"n={problem.n} 無法計算 σ_HSS: {e}")
            sigma_hss = None

        table.add_row(str(problem.n), _fmt(sigma_cscs), _fmt(factor), _fmt(sigma_hss))

    console.print(table)


@app.command()
def list_methods():
    """列出所有求解方法與問題族"""
    table = Table(title="求解方法")
    table.add_column("方法", style="cyan")
    table.add_column("說明")
    for method in SolverMethod:
        table.add_row(method.value, METHOD_DESCRIPTIONS[method])
    console.print(table)

    console.print("\n📚 問題族:")
    for family, description in FAMILY_DESCRIPTIONS.items():
        console.print(f"  • {family.value}: {description}")


@app.command()
def diagnose(
    family: ProblemFamily = typer.Option(ProblemFamily.EXAMPLE1, help="問題族"),
    n: int = typer.Option(32, help="維度（稠密計算，建議不超過數百）"),
    gamma: float = typer.Option(10.0, help="Example 1 的 γ"),
    alpha: float = typer.Option(1.5, help="Example 2 的 α"),
    problem_file: Path | None = typer.Option(None, help="custom 問題族的 CSV 檔案"),
    sigma: float | None = typer.Option(None, help="σ（預設為 σ_CSCS）"),
    mu: float = typer.Option(1e-3, help="光滑化參數 μ"),
    epsilon: float = typer.Option(1e-6, help="μ 上限計算所用的 ε"),
    eta: float = typer.Option(0.01, help="Picard 內掃描門檻 η"),
):
    """小型問題的收斂性診斷"""
    setup_logging()
    spec = build_spec(
        None,
        {
            "family": family,
            "sizes": [n],
            "gamma": gamma,
            "alpha": alpha,
            "problem_file": problem_file,
            "sigma": sigma,
        },
    )

    try:
        smoothing = SmoothingParams(mu=mu)
    except ValidationError as e:
        console.print(f"❌ μ 設定錯誤: {e}")
        raise typer.Exit(EXIT_SPEC_ERROR) from e

    try:
        problem = BenchmarkRunner(spec).build_problem(n)
        c_vec, s_vec = cscs_split(problem.matrix)
        circulant = circulant_spectrum(c_vec)
        skew = skew_circulant_spectrum(s_vec)
        sigma_value = spec.sigma if spec.sigma is not None else sigma_cscs_opt(circulant, skew)

        title = problem.label or spec.family.value
        table = Table(title=f"{title} 收斂診斷 (σ = {sigma_value:.6g})")
        table.add_column("量", style="cyan")
        table.add_column("值", justify="right")

        rho = spectral_radius(iteration_matrix_dense(problem.matrix, sigma_value))
        table.add_row("ρ(M(σ))", _fmt(rho, ".6g"))
        table.add_row("f(σ)", _fmt(convergence_factor_bound(sigma_value, circulant, skew), ".6g"))

        if problem.exact_solution is not None:
            diag = attraction_diagnostics(
                problem.matrix, sigma_value, np.abs(problem.exact_solution), smoothing.mu
            )
            table.add_row("ρ(M(σ, x*))", _fmt(diag.spectral_radius, ".6g"))
            table.add_row("ξ", _fmt(diag.xi, ".6g"))
            table.add_row("δ", _fmt(diag.delta, ".6g"))
            table.add_row("(ξ+δ)²", _fmt(diag.bound, ".6g"))
        else:
            console.print("⚠️ 問題沒有精確解，略過吸引域診斷")

        threshold = mu_threshold(problem.matrix, sigma_value, epsilon)
        table.add_row(f"μ 上限 (ε={epsilon:g})", _fmt(threshold, ".6g"))
        requirement = picard_inner_sweep_requirement(problem.matrix, sigma_value, eta)
        shown = "-" if requirement is None else str(requirement)
        table.add_row(f"內掃描需求 N (η={eta:g})", shown)

        lipschitz_v, lipschitz_u = theta_lipschitz_bounds(problem.matrix, sigma_value)
        table.add_row("L_V · L_U", _fmt(lipschitz_v * lipschitz_u, ".6g"))

        # B = 0 的線性系統 Ax = b
        _, linear = cscs_solve(problem.matrix, problem.rhs, sigma_value)
        status = "收斂" if linear.converged else "未收斂"
        table.add_row("線性 CSCS 迭代次數", f"{linear.iterations} ({status})")
    except (AveToeplitzError, ValueError) as e:
        console.print(f"❌ 診斷失敗: {e}")
        raise typer.Exit(1) from e

    console.print(table)


if __name__ == "__main__":
    app()
