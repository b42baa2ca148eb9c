"""评估服务 - SNR、计时与外部 PESQ 钩子"""

from __future__ import annotations

import math
import re
import shlex
import statistics
import subprocess
import time
from collections import defaultdict
from pathlib import Path
from typing import Callable, Iterable, Optional, TypeVar

import numpy as np

from ..core.errors import LengthMismatch, ZeroReference
from ..core.models import BenchRecord
from ..utils.helpers import fill_template
from ..utils.log import logger

R = TypeVar("R")

_FLOAT_RE = re.compile(r"[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?")


def snr_db(reference, estimate) -> float:
    """SNR = 20 * log10(||x|| / ||x - x_hat||)，误差为零时返回 +inf

    Raises:
        LengthMismatch: 长度不同
        ZeroReference: 参考信号全零
    """
    x = np.asarray(reference, dtype=np.float64)
    x_hat = np.asarray(estimate, dtype=np.float64)
    if x.shape != x_hat.shape:
        raise LengthMismatch(f"参考长度 {x.shape} 与估计长度 {x_hat.shape} 不一致")
    signal_norm = float(np.linalg.norm(x))
    if signal_norm == 0.0:
        raise ZeroReference("参考信号全零，SNR 无定义")
    error_norm = float(np.linalg.norm(x - x_hat))
    if error_norm == 0.0:
        return math.inf
    return 20.0 * math.log10(signal_norm / error_norm)


def timed(action: Callable[[], R]) -> tuple[R, float]:
    """单调时钟计时，返回 (结果, 耗时秒数)"""
    start = time.perf_counter()
    result = action()
    return result, max(time.perf_counter() - start, 0.0)


def timed_median(action: Callable[[], R], repeats: int = 1) -> tuple[R, float]:
    """重复 repeats 次取耗时中位数；返回最后一次的结果（动作是确定性的）"""
    repeats = max(1, int(repeats))
    elapsed = []
    result = None
    for _ in range(repeats):
        result, seconds = timed(action)
        elapsed.append(seconds)
    return result, float(statistics.median(elapsed))


def run_pesq(command_template: str, ref_path: Path, deg_path: Path, timeout: float = 120.0) -> Optional[float]:
    """调用外部 PESQ 程序，解析标准输出中的最后一个浮点数

    Args:
        command_template: 含 {ref} 与 {deg} 占位符的命令模板
        ref_path: 参考 WAV
        deg_path: 失真（重建）WAV

    Returns:
        PESQ 分数，失败时返回 None
    """
    # 先切分再替换，路径中的空格不会拆开参数
    args = [fill_template(t, ref=str(ref_path), deg=str(deg_path)) for t in shlex.split(command_template)]
    command = " ".join(args)
    try:
        proc = subprocess.run(
            args,
            capture_output=True,
            text=True,
            timeout=timeout,
            check=False,
        )
    except (OSError, subprocess.SubprocessError) as e:
        logger.warning(f"[resample] PESQ 命令执行失败: {command}, error={e}")
        return None

    if proc.returncode != 0:
        logger.warning(f"[resample] PESQ 命令返回 {proc.returncode}: {proc.stderr.strip()[:200]}")
        return None
    matches = _FLOAT_RE.findall(proc.stdout)
    if not matches:
        logger.warning(f"[resample] PESQ 输出中没有数值: {proc.stdout.strip()[:200]}")
        return None
    return float(matches[-1])


def mean_elapsed_by_method(records: Iterable[BenchRecord]) -> dict[str, float]:
    """各方法的平均耗时"""
    grouped: dict[str, list[float]] = defaultdict(list)
    for record in records:
        grouped[record.method].append(record.elapsed_seconds)
    return {method: statistics.fmean(values) for method, values in sorted(grouped.items())}


def normalized_times(records: Iterable[BenchRecord]) -> dict[str, float]:
    """各方法平均耗时除以所有方法中的最大值，取值 (0, 1]

    全部耗时为零（例如关闭计时）时返回空字典。
    """
    means = mean_elapsed_by_method(records)
    peak = max(means.values(), default=0.0)
    if peak <= 0:
        return {}
    return {method: value / peak for method, value in means.items()}


def timing_flatness(records: Iterable[BenchRecord]) -> dict[str, float]:
    """各方法在不同采样率下平均耗时的 max/min 比值（观测性指标）"""
    grouped: dict[str, dict[float, list[float]]] = defaultdict(lambda: defaultdict(list))
    for record in records:
        grouped[record.method][record.rate].append(record.elapsed_seconds)

    ratios = {}
    for method, by_rate in sorted(grouped.items()):
        means = [statistics.fmean(v) for v in by_rate.values()]
        low, high = min(means), max(means)
        ratios[method] = high / low if low > 0 else math.inf
    return ratios
