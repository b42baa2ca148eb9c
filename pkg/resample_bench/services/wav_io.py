"""WAV 读写服务 - RIFF/WAVE PCM 的逐位精确编解码

只支持 PCM (格式标签 1) 的 16/24 位文件；LIST、fact 等附加块直接跳过。
多声道输入按样本帧求算术平均下混为单声道。
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..core.constants import PCM_FORMAT_TAG, SUPPORTED_BIT_DEPTHS
from ..core.errors import MalformedRiff, NonFiniteSample, UnsupportedCodec, UnsupportedDepth
from ..core.models import AudioSignal
from ..utils.log import logger

_FMT_STRUCT = struct.Struct("<HHIIHH")
_HEADER_STRUCT = struct.Struct("<4sI4s4sIHHIIHH4sI")

# 解码比例：16 位除以 2^15，24 位除以 2^23
_SCALE = {16: 32768.0, 24: 8388608.0}


def _iter_chunks(data: bytes):
    """遍历 RIFF 子块，产出 (块ID, 块内容)；声明长度超出实际字节数时抛出 MalformedRiff"""
    offset = 12
    end = len(data)
    while offset + 8 <= end:
        chunk_id, size = struct.unpack_from("<4sI", data, offset)
        body_start = offset + 8
        body_end = body_start + size
        if body_end > end:
            raise MalformedRiff(
                f"块 {chunk_id!r} 声明 {size} 字节，但只剩 {end - body_start} 字节"
            )
        yield chunk_id, data[body_start:body_end]
        # 奇数长度的块后面有一个填充字节
        offset = body_end + (size & 1)


def _decode_pcm(raw: bytes, bits: int, channels: int) -> np.ndarray:
    """把 PCM 数据块解码为 (帧数, 声道数) 的浮点数组"""
    width = bits // 8
    block_align = width * channels
    frames = len(raw) // block_align
    raw = raw[: frames * block_align]

    if bits == 16:
        ints = np.frombuffer(raw, dtype="<i2").astype(np.int32)
    else:
        triples = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
        ints = triples[:, 0] | (triples[:, 1] << 8) | (triples[:, 2] << 16)
        # 24 位补码符号扩展
        ints = np.where(ints >= 1 << 23, ints - (1 << 24), ints)

    return (ints.astype(np.float64) / _SCALE[bits]).reshape(frames, channels)


def read_wav(data: bytes) -> AudioSignal:
    """解码 RIFF/WAVE 字节流为单声道信号

    Args:
        data: 完整的文件字节

    Returns:
        AudioSignal，16 位样本按 s/32768、24 位按 s/8388608 映射

    Raises:
        MalformedRiff: 缺少 RIFF/WAVE/fmt/data 或数据被截断
        UnsupportedCodec: 格式标签不是 PCM
        UnsupportedDepth: 位深不是 16 或 24
    """
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedRiff("缺少 RIFF/WAVE 文件头")

    fmt: Optional[tuple] = None
    raw: Optional[bytes] = None
    for chunk_id, body in _iter_chunks(data):
        if chunk_id == b"fmt ":
            if len(body) < _FMT_STRUCT.size:
                raise MalformedRiff(f"fmt 块过短: {len(body)} 字节")
            fmt = _FMT_STRUCT.unpack_from(body)
        elif chunk_id == b"data":
            raw = body
        else:
            logger.debug(f"[resample] 跳过块 {chunk_id!r} ({len(body)} 字节)")

    if fmt is None:
        raise MalformedRiff("缺少 fmt 块")
    if raw is None:
        raise MalformedRiff("缺少 data 块")

    tag, channels, rate, _byte_rate, block_align, bits = fmt
    if tag != PCM_FORMAT_TAG:
        raise UnsupportedCodec(f"只支持 PCM (格式标签 1)，实际为 {tag}")
    if bits not in SUPPORTED_BIT_DEPTHS:
        raise UnsupportedDepth(f"只支持 16/24 位，实际为 {bits}")
    if channels < 1 or rate < 1:
        raise MalformedRiff(f"声道数或采样率非法: channels={channels}, rate={rate}")
    if block_align != channels * bits // 8:
        raise MalformedRiff(f"block_align={block_align} 与声道数/位深不一致")

    frames = _decode_pcm(raw, bits, channels)
    if frames.shape[0] == 0:
        raise MalformedRiff("data 块没有完整的样本帧")

    samples = frames[:, 0] if channels == 1 else frames.mean(axis=1)
    return AudioSignal(
        samples=samples,
        sample_rate_hz=int(rate),
        source_bit_depth=int(bits),
        source_channels=int(channels),
    )


def write_wav(signal: AudioSignal, bit_depth: int = 16) -> bytes:
    """编码为标准 44 字节头的单声道 16 位 PCM

    幅度先裁剪到 [-1, 1]，再按 round(s * 32768) 量化并限制在 int16 范围内，
    因此 read_wav 解码出的任何 16 位电平都能逐位还原。

    Raises:
        UnsupportedDepth: bit_depth 不是 16
        NonFiniteSample: 含 NaN/inf
    """
    if bit_depth != 16:
        raise UnsupportedDepth(f"写出只支持 16 位，实际为 {bit_depth}")
    samples = np.asarray(signal.samples, dtype=np.float64)
    if not np.all(np.isfinite(samples)):
        raise NonFiniteSample("样本包含 NaN 或无穷大")

    clipped = np.clip(samples, -1.0, 1.0)
    ints = np.clip(np.round(clipped * 32768.0), -32768, 32767).astype("<i2")
    payload = ints.tobytes()

    header = _HEADER_STRUCT.pack(
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        PCM_FORMAT_TAG,
        1,
        signal.sample_rate_hz,
        signal.sample_rate_hz * 2,
        2,
        16,
        b"data",
        len(payload),
    )
    return header + payload


def load_wav(path: Union[str, Path]) -> AudioSignal:
    """从文件读取"""
    return read_wav(Path(path).read_bytes())


def save_wav(path: Union[str, Path], signal: AudioSignal) -> Path:
    """写出到文件，自动创建父目录"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_wav(signal))
    return path
