"""采样服务 - 均匀/随机采样模式的生成与应用

均匀采样使用取整递增规则：下标 i 被保留当且仅当 floor((i+1)*r) > floor(i*r)。
r = 1/M 时即每 M 个取一个；r > 0.5 时得到周期性的准均匀模式。
采样率先转成有理数再做整数运算，避免浮点取整误差破坏周期性。

随机采样是精确计数的无放回抽样：numpy PCG64 生成器（SeedSequence(seed) 播种）调用
Generator.choice(n, k, replace=False) 后排序。同一 (长度, 采样率, 种子) 在任何平台上得到同一模式。
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..core.errors import InvalidRate, LengthMismatch, TooFewSamples
from ..core.models import Frame, SampleMask, Sampling

_SEED_MASK = (1 << 64) - 1
_MAX_DENOMINATOR = 1 << 20


def _check_rate(rate: float) -> None:
    if not (0.0 < rate <= 1.0) or math.isnan(rate):
        raise InvalidRate(f"采样率必须在 (0, 1] 内: {rate}")


def uniform_mask(frame_len: int, rate: float) -> SampleMask:
    """均匀（周期准均匀）采样模式

    Raises:
        InvalidRate: rate 不在 (0, 1] 内
    """
    _check_rate(rate)
    ratio = Fraction(rate).limit_denominator(_MAX_DENOMINATOR)
    p, q = ratio.numerator, ratio.denominator
    i = np.arange(frame_len, dtype=np.int64)
    keep = ((i + 1) * p) // q > (i * p) // q
    return SampleMask(frame_len=frame_len, kept=np.flatnonzero(keep), rate=rate)


def sample_count(frame_len: int, rate: float) -> int:
    """随机模式的样本数 round(rate * frame_len)（半数向上取整）"""
    return int(math.floor(rate * frame_len + 0.5))


def random_mask(frame_len: int, rate: float, seed: int) -> SampleMask:
    """精确计数的随机采样模式

    Raises:
        InvalidRate: rate 不在 (0, 1] 内
        TooFewSamples: round(rate * frame_len) < 2
    """
    _check_rate(rate)
    k = sample_count(frame_len, rate)
    if k < 2:
        raise TooFewSamples(f"随机采样至少需要 2 个样本: round({rate} * {frame_len}) = {k}")
    if k >= frame_len:
        kept = np.arange(frame_len, dtype=np.int64)
    else:
        rng = np.random.default_rng(int(seed) & _SEED_MASK)
        kept = np.sort(rng.choice(frame_len, size=k, replace=False)).astype(np.int64)
    return SampleMask(frame_len=frame_len, kept=kept, rate=rate)


def frame_seed(seed: int, frame_index: int) -> int:
    """逐帧种子：seed XOR 帧序号（64 位）"""
    return (int(seed) ^ int(frame_index)) & _SEED_MASK


def make_mask(kind: Sampling, frame_len: int, rate: float, seed: int = 0) -> SampleMask:
    """按采样方式分派"""
    if kind is Sampling.UNIFORM:
        return uniform_mask(frame_len, rate)
    return random_mask(frame_len, rate, seed)


def apply_mask(frame: Frame, mask: SampleMask) -> Frame:
    """保留位置取原值，其余置为精确的 0.0

    Raises:
        LengthMismatch: 模式长度与帧长不一致
    """
    if mask.frame_len != frame.frame_len:
        raise LengthMismatch(f"采样模式长度 {mask.frame_len} 与帧长 {frame.frame_len} 不一致")
    out = np.zeros(frame.frame_len, dtype=np.float64)
    out[mask.kept] = frame.data[mask.kept]
    return frame.with_data(out)
