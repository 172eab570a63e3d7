"""例外類別

套件內所有可預期的錯誤都繼承自 AveToeplitzError。
不收斂不是例外，會記錄在 IterationReport.converged。
"""

import numpy as np


class AveToeplitzError(Exception):
    """套件錯誤基底類別"""


class DimensionError(AveToeplitzError, ValueError):
    """向量或矩陣維度不一致"""


class InvalidMatrixError(AveToeplitzError, ValueError):
    """Toeplitz 資料不合法（角落元素不一致、非有限值）"""


class ParameterError(AveToeplitzError, ValueError):
    """演算法參數超出允許範圍"""


class SingularShiftError(AveToeplitzError, np.linalg.LinAlgError):
    """平移後的譜或稠密因子接近奇異"""


class DenseCapError(AveToeplitzError):
    """矩陣維度超過稠密運算上限"""


class IndefiniteHermitianPartError(AveToeplitzError):
    """Hermitian 部分不是正定"""


class SpecError(AveToeplitzError):
    """實驗設定或設定檔錯誤"""


class ExportError(AveToeplitzError):
    """輸出檔案寫入失敗"""
