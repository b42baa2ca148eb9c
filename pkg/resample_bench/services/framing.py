"""分帧服务 - 不重叠、不加窗的定长分帧与拼接"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from ..core.constants import DEFAULT_FRAME_LEN
from ..core.errors import EmptySignal, LengthMismatch
from ..core.models import AudioSignal, Frame


def split_frames(
    signal: Union[AudioSignal, np.ndarray],
    frame_len: int = DEFAULT_FRAME_LEN,
) -> list[Frame]:
    """切分为 ceil(n / frame_len) 帧，尾帧补零

    Args:
        signal: 信号或样本数组
        frame_len: 帧长

    Returns:
        帧列表，index 从 0 开始

    Raises:
        EmptySignal: 信号为空
    """
    samples = signal.samples if isinstance(signal, AudioSignal) else np.asarray(signal, dtype=np.float64)
    if frame_len < 1:
        raise ValueError(f"frame_len 必须为正数: {frame_len}")
    n = int(samples.shape[0])
    if n == 0:
        raise EmptySignal("信号为空，无法分帧")

    count = -(-n // frame_len)
    padded = np.zeros(count * frame_len, dtype=np.float64)
    padded[:n] = samples
    blocks = padded.reshape(count, frame_len)

    frames = []
    for i in range(count):
        valid_len = min(frame_len, n - i * frame_len)
        frames.append(Frame(data=blocks[i].copy(), index=i, valid_len=valid_len))
    return frames


def merge_frames(frames: Sequence[Frame], total_len: int) -> np.ndarray:
    """按序号拼接每帧的有效部分

    Raises:
        LengthMismatch: 帧序号不连续，或有效长度之和不等于 total_len
    """
    ordered = sorted(frames, key=lambda f: f.index)
    for expected, frame in enumerate(ordered):
        if frame.index != expected:
            raise LengthMismatch(f"帧序号不连续: 期望 {expected}，实际 {frame.index}")
    valid_total = sum(f.valid_len for f in ordered)
    if valid_total != total_len:
        raise LengthMismatch(f"有效样本数 {valid_total} 与 total_len {total_len} 不一致")
    if not ordered:
        return np.zeros(0, dtype=np.float64)
    return np.concatenate([f.valid for f in ordered])
