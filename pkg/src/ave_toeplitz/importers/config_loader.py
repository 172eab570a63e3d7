"""TOML 實驗設定檔

各段落（[problem]、[solver]、[run]、[output] …）只是分組用，
讀入後攤平成單層鍵值，直接對應 ExperimentSpec 欄位。
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any

from ave_toeplitz.exceptions import SpecError
from ave_toeplitz.models.experiment import ExperimentSpec

_KNOWN_KEYS = set(ExperimentSpec.model_fields)


def load_experiment_config(path: str | Path) -> dict[str, Any]:
    """讀取設定檔並回傳攤平後的鍵值（尚未驗證）"""
    config_path = Path(path)
    if not config_path.exists():
        raise SpecError(f"設定檔不存在: {config_path}")

    try:
        with config_path.open("rb") as f:
            document = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise SpecError(f"設定檔格式錯誤: {e}") from e

    flat: dict[str, Any] = {}
    for key, value in document.items():
        items = value.items() if isinstance(value, dict) else [(key, value)]
        for raw_name, item in items:
            name = raw_name.replace("-", "_")
            if name not in _KNOWN_KEYS:
                raise SpecError(f"設定檔含有未知的鍵: {raw_name}")
            if name in flat:
                raise SpecError(f"設定檔重複定義: {raw_name}")
            flat[name] = item
    return flat
