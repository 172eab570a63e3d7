"""Toeplitz 絕對值方程求解工具

以循環 / 斜循環分裂 (CSCS) 與 FFT 求解 Ax − |x| = b，
並提供 HSS 與廣義牛頓法基準、參數選取、收斂性診斷與基準實驗 CLI。
"""

__version__ = "0.1.0"

from .main import app

__all__ = ["__version__", "app"]
