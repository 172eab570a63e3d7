"""Toeplitz 核心運算測試

測試矩陣建構、快速矩陣向量乘法、CSCS 分裂與循環/斜循環譜。
"""

import numpy as np
import pytest
from scipy import linalg

from ave_toeplitz.algorithms.splittings import CscsSplitting, HssSplitting, splitting_sweep
from ave_toeplitz.algorithms.toeplitz_core import (
    apply_circulant,
    apply_shifted_circulant_inverse,
    apply_shifted_skew_inverse,
    apply_skew_circulant,
    check_dense_cap,
    circulant_spectrum,
    cscs_split,
    dense_circulant,
    dense_skew_circulant,
    materialize_dense,
    skew_circulant_spectrum,
    toeplitz_matvec,
    toeplitz_new,
)
from ave_toeplitz.exceptions import (
    DenseCapError,
    DimensionError,
    InvalidMatrixError,
    ParameterError,
    SingularShiftError,
)
from ave_toeplitz.models.problem_params import Example1Params
from ave_toeplitz.problems.examples import example1


class TestToeplitzNew:
    """Toeplitz 矩陣建構測試"""

    def test_dense_layout(self):
        """測試 M[i, j] = a_{i-j}"""
        matrix = toeplitz_new([1, 0], [1, 1])
        np.testing.assert_array_equal(materialize_dense(matrix), [[1, 1], [0, 1]])

    def test_corner_mismatch(self):
        """測試對角元素不一致"""
        with pytest.raises(InvalidMatrixError):
            toeplitz_new([1, 2, 3], [5, 2, 3])

    def test_length_mismatch(self):
        """測試第一行與第一列長度不同"""
        with pytest.raises(DimensionError):
            toeplitz_new([1, 2, 3], [1, 2])

    def test_non_finite_entries(self):
        """測試非有限值"""
        with pytest.raises(InvalidMatrixError):
            toeplitz_new([1, np.nan], [1, 0])

    def test_single_entry(self):
        """測試 1×1 矩陣"""
        matrix = toeplitz_new([3.0], [3.0])
        assert matrix.n == 1
        assert matrix.diagonal == 3.0
        np.testing.assert_allclose(toeplitz_matvec(matrix, [2.0]), [6.0])

    def test_matrix_is_immutable(self):
        """測試第一行不可寫入"""
        matrix = toeplitz_new([1, 2], [1, 3])
        with pytest.raises(ValueError):
            matrix.first_col[0] = 5

    def test_dense_cap(self):
        """測試稠密運算上限"""
        check_dense_cap(8, dense_cap=8)
        with pytest.raises(DenseCapError):
            check_dense_cap(9, dense_cap=8)


class TestMatvec:
    """快速矩陣向量乘法測試"""

    def test_matches_dense(self, random_pd_toeplitz, rng):
        """測試與稠密乘積一致"""
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        dense = materialize_dense(random_pd_toeplitz)
        np.testing.assert_allclose(
            toeplitz_matvec(random_pd_toeplitz, x), dense @ x, rtol=1e-12, atol=1e-12
        )

    @pytest.mark.parametrize("seed", range(100))
    def test_random_sizes_match_dense(self, seed):
        """測試 n ∈ {2, …, 128} 的隨機矩陣，相對誤差不超過 1e−12"""
        generator = np.random.default_rng(seed)
        n = int(generator.integers(2, 129))
        col = generator.standard_normal(n) + 1j * generator.standard_normal(n)
        row = generator.standard_normal(n) + 1j * generator.standard_normal(n)
        row[0] = col[0]
        matrix = toeplitz_new(col, row)
        x = generator.standard_normal(n) + 1j * generator.standard_normal(n)

        expected = linalg.toeplitz(col, row) @ x
        error = np.linalg.norm(toeplitz_matvec(matrix, x) - expected)
        assert error <= 1e-12 * np.linalg.norm(expected)

    def test_example1_alternating_vector(self):
        """測試 Example 1 在 x = (−ι, ι, −ι, ι) 上的乘積"""
        matrix = example1(Example1Params(n=4))
        x = np.array([-1j, 1j, -1j, 1j])
        expected = materialize_dense(matrix) @ x
        np.testing.assert_allclose(toeplitz_matvec(matrix, x), expected, atol=1e-12)

    def test_dimension_check(self, random_pd_toeplitz):
        """測試向量長度錯誤"""
        with pytest.raises(DimensionError):
            toeplitz_matvec(random_pd_toeplitz, np.ones(15))

    def test_embedding_cached(self, random_pd_toeplitz):
        """測試嵌入 DFT 只計算一次"""
        assert random_pd_toeplitz.embedding_fft is random_pd_toeplitz.embedding_fft


class TestCscsSplit:
    """CSCS 分裂測試"""

    def test_reconstructs_matrix(self, random_pd_toeplitz):
        """測試 C + S = A"""
        c, s = cscs_split(random_pd_toeplitz)
        total = dense_circulant(c) + dense_skew_circulant(s)
        np.testing.assert_allclose(total, materialize_dense(random_pd_toeplitz), atol=1e-14)

    def test_example1_split_values(self):
        """測試 Example 1 n = 4 的分裂係數"""
        matrix = example1(Example1Params(n=4))
        c, s = cscs_split(matrix)
        np.testing.assert_allclose(c, [5, -0.5 - 1j, -0.5, 1j])
        np.testing.assert_allclose(s, [5, -0.5 - 1j, -0.5 - 3j, -1j])

    def test_skew_circulant_wraps_with_sign(self):
        """測試斜循環矩陣的環繞元素取負號"""
        np.testing.assert_array_equal(dense_skew_circulant([0, 1]), [[0, -1], [1, 0]])


class TestSpectra:
    """循環與斜循環譜測試"""

    def test_cyclic_shift_roots_of_unity(self):
        """測試循環位移的特徵值為單位根"""
        spectrum = circulant_spectrum([0, 1, 0, 0])
        roots = np.exp(2j * np.pi * np.arange(4) / 4)
        for root in roots:
            assert np.min(np.abs(spectrum.lambdas - root)) < 1e-12

    def test_rank_one_plus_identity(self):
        """測試 c = [2, 1, …, 1] 的特徵值"""
        n = 6
        spectrum = circulant_spectrum([2] + [1] * (n - 1))
        values = np.sort(spectrum.lambdas.real)
        np.testing.assert_allclose(values, [1] * (n - 1) + [n + 1], atol=1e-12)
        np.testing.assert_allclose(spectrum.lambdas.imag, 0, atol=1e-12)

    def test_skew_rotation(self):
        """測試 s = [0, 1] 的特徵值為 ±ι"""
        spectrum = skew_circulant_spectrum([0, 1])
        for value in (1j, -1j):
            assert np.min(np.abs(spectrum.lambdas - value)) < 1e-12

    def test_skew_spectrum_matches_dense(self):
        """測試 Example 1 斜循環部分的特徵值與稠密計算一致"""
        _, s = cscs_split(example1(Example1Params(n=8)))
        fast = skew_circulant_spectrum(s).lambdas
        dense = linalg.eigvals(dense_skew_circulant(s))
        for value in dense:
            assert np.min(np.abs(fast - value)) < 1e-10

    def test_apply_matches_dense(self, random_pd_toeplitz, rng):
        """測試 C·x 與 S·x"""
        c, s = cscs_split(random_pd_toeplitz)
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        np.testing.assert_allclose(
            apply_circulant(circulant_spectrum(c), x), dense_circulant(c) @ x, atol=1e-12
        )
        np.testing.assert_allclose(
            apply_skew_circulant(skew_circulant_spectrum(s), x),
            dense_skew_circulant(s) @ x,
            atol=1e-12,
        )


class TestShiftedInverses:
    """平移逆運算測試"""

    def test_shifted_circulant_inverse(self, random_pd_toeplitz, rng):
        """測試 (σI + C)⁻¹ y"""
        c, _ = cscs_split(random_pd_toeplitz)
        y = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        x = apply_shifted_circulant_inverse(1.3, circulant_spectrum(c), y)
        expected = linalg.solve(1.3 * np.eye(16) + dense_circulant(c), y)
        np.testing.assert_allclose(x, expected, rtol=1e-10, atol=1e-12)

    def test_shifted_skew_inverse(self, random_pd_toeplitz, rng):
        """測試 (σI + S)⁻¹ y"""
        _, s = cscs_split(random_pd_toeplitz)
        y = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        x = apply_shifted_skew_inverse(0.7, skew_circulant_spectrum(s), y)
        expected = linalg.solve(0.7 * np.eye(16) + dense_skew_circulant(s), y)
        np.testing.assert_allclose(x, expected, rtol=1e-10, atol=1e-12)

    def test_two_by_two_skew(self):
        """測試 n = 2 的斜循環平移逆：[[1, −1], [1, 1]] x = e₁"""
        x = apply_shifted_skew_inverse(1.0, skew_circulant_spectrum([0, 1]), [1, 0])
        np.testing.assert_allclose(x, [0.5, -0.5], atol=1e-12)

    def test_non_positive_sigma(self):
        """測試 σ 必須為正"""
        with pytest.raises(ParameterError):
            apply_shifted_circulant_inverse(0.0, circulant_spectrum([1, 0]), [1, 0])

    def test_singular_shift(self):
        """測試 σ + λ = 0"""
        with pytest.raises(SingularShiftError):
            apply_shifted_circulant_inverse(1.0, circulant_spectrum([-1, 0, 0]), [1, 0, 0])


class TestSplittings:
    """分裂介面測試"""

    def test_cscs_positive_definite(self, random_pd_toeplitz):
        """測試隨機對角占優矩陣的 C、S 皆正定"""
        assert CscsSplitting(random_pd_toeplitz, 1.0).is_positive_definite

    def test_sweep_fixed_point(self, random_pd_toeplitz, rng):
        """測試線性系統的解是 CSCS 與 HSS 掃描的不動點"""
        x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        b = toeplitz_matvec(random_pd_toeplitz, x)
        for splitting in (
            CscsSplitting(random_pd_toeplitz, 2.0),
            HssSplitting(random_pd_toeplitz, 2.0),
        ):
            np.testing.assert_allclose(splitting_sweep(splitting, x, b), x, atol=1e-10)

    def test_hss_parts(self, random_pd_toeplitz):
        """測試 H 為 Hermitian、K 為斜 Hermitian"""
        splitting = HssSplitting(random_pd_toeplitz, 1.0)
        np.testing.assert_allclose(splitting.hermitian, splitting.hermitian.conj().T)
        np.testing.assert_allclose(splitting.skew_hermitian, -splitting.skew_hermitian.conj().T)
