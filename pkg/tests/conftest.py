"""pytest 配置檔案

提供測試用的 fixtures 和配置。
"""

import numpy as np
import pytest

from ave_toeplitz.algorithms.toeplitz_core import toeplitz_new
from ave_toeplitz.models.problem import AveProblem
from ave_toeplitz.models.problem_params import Example1Params
from ave_toeplitz.models.toeplitz import ToeplitzMatrix
from ave_toeplitz.problems.examples import (
    build_example1_problem,
    exact_solution,
    rhs_from_solution,
)


def make_pd_toeplitz(rng: np.random.Generator, n: int) -> ToeplitzMatrix:
    """對角元素大於所有非對角元素模之和，C 與 S 因此都是正定"""
    off_col = rng.uniform(-1, 1, n - 1) + 1j * rng.uniform(-1, 1, n - 1)
    off_row = rng.uniform(-1, 1, n - 1) + 1j * rng.uniform(-1, 1, n - 1)
    a0 = np.abs(off_col).sum() + np.abs(off_row).sum() + 2.0
    col = np.concatenate([[a0], off_col])
    row = np.concatenate([[a0], off_row])
    return toeplitz_new(col, row)


@pytest.fixture
def rng() -> np.random.Generator:
    """固定種子的亂數產生器"""
    return np.random.default_rng(20240611)


@pytest.fixture
def random_pd_toeplitz(rng) -> ToeplitzMatrix:
    """n = 16 的隨機複 Toeplitz 矩陣，CSCS 分裂兩部分皆正定"""
    return make_pd_toeplitz(rng, 16)


@pytest.fixture
def random_pd_problem(random_pd_toeplitz) -> AveProblem:
    """以 x* = (−1)^k ι 產生右端項的隨機問題"""
    x_star = exact_solution(random_pd_toeplitz.n)
    return AveProblem(
        matrix=random_pd_toeplitz,
        rhs=rhs_from_solution(random_pd_toeplitz, x_star),
        exact_solution=x_star,
    )


@pytest.fixture
def pd_problem_factory():
    """依種子產生隨機正定分裂問題，n 未指定時取 2 … 32"""

    def factory(seed: int, n: int | None = None) -> AveProblem:
        generator = np.random.default_rng(seed)
        size = int(generator.integers(2, 33)) if n is None else n
        matrix = make_pd_toeplitz(generator, size)
        x_star = exact_solution(size)
        return AveProblem(
            matrix=matrix,
            rhs=rhs_from_solution(matrix, x_star),
            exact_solution=x_star,
        )

    return factory


@pytest.fixture
def small_example1() -> AveProblem:
    """Example 1，n = 32，γ = 10，(c, d) = (2, 3)"""
    return build_example1_problem(Example1Params(n=32))


@pytest.fixture
def temp_output_dir(tmp_path):
    """提供臨時輸出目錄"""
    output_dir = tmp_path / "output"
    output_dir.mkdir()
    return output_dir
