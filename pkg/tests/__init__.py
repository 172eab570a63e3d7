"""測試套件

提供完整的單元測試和整合測試。
"""
