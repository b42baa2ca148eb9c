"""工具函数"""

from __future__ import annotations

import re
from pathlib import Path

from ..core.errors import UsageError


def is_power_of_two(n: int) -> bool:
    """判断正整数是否为 2 的幂"""
    return n > 0 and (n & (n - 1)) == 0


def parse_csv_list(text: str) -> list[str]:
    """解析逗号分隔列表，去掉空白项

    Args:
        text: 例如 "0.1, 0.2,0.3"

    Returns:
        ["0.1", "0.2", "0.3"]
    """
    return [item.strip() for item in str(text).split(",") if item.strip()]


def parse_rates(text: str) -> list[float]:
    """解析采样率列表

    支持 "0.1,0.2" 与区间写法 "0.1..0.9"（步长 0.1）。
    """
    text = str(text).strip()
    match = re.fullmatch(r"([0-9.]+)\s*\.\.\s*([0-9.]+)", text)
    if match:
        start, stop = float(match.group(1)), float(match.group(2))
        count = int(round((stop - start) / 0.1)) + 1
        return [round(start + 0.1 * i, 10) for i in range(max(count, 0))]
    try:
        return [float(item) for item in parse_csv_list(text)]
    except ValueError as e:
        raise UsageError(f"无法解析采样率列表: {text!r}") from e


def format_rate(rate: float) -> str:
    """采样率用于文件名时的写法，例如 0.5 -> "0.50" """
    return f"{rate:.2f}"


def safe_name(name: str) -> str:
    """清理文件名中的非法字符"""
    return re.sub(r'[<>:"/\\|?*\s]', "_", str(name))


def fill_template(template: str, **values: str) -> str:
    """替换命令模板中的 {key} 占位符（只替换给定的键，其他花括号保持原样）

    Args:
        template: 例如 "pesq +16000 {ref} {deg}"
        values: 占位符取值

    Returns:
        替换后的字符串
    """
    result = template
    for key, value in values.items():
        result = result.replace("{" + key + "}", str(value))
    return result


def list_wav_files(directory: Path) -> list[Path]:
    """按文件名排序列出目录下的 WAV 文件（大小写不敏感，不递归）"""
    directory = Path(directory)
    if not directory.is_dir():
        return []
    return sorted(
        (p for p in directory.iterdir() if p.is_file() and p.suffix.lower() == ".wav"),
        key=lambda p: p.name,
    )

