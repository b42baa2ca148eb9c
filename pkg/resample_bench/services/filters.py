"""滤波器服务 - 抗混叠与恢复低通滤波器的设计和应用

三类滤波器：
- FFT 砖墙：正变换后把 |f| > cutoff 的频点清零再反变换（恰在 cutoff 的频点保留）
- FIR：加窗 sinc，线性相位，应用时按群延迟前移对齐
- IIR：Butterworth / Chebyshev-I 模拟原型经预畸变、双线性变换得到二阶节级联，单向因果滤波

cutoff 均为归一化频率（相对采样率，0.5 为奈奎斯特）。
"""

from __future__ import annotations

from dataclasses import replace
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy import signal as sps

from ..core.constants import MAGNITUDE_FLOOR_DB, NYQUIST, RESPONSE_POINTS
from ..core.errors import InvalidSpec, NonPowerOfTwoLength
from ..core.models import (
    Biquad,
    DesignedFilter,
    FilterKind,
    FilterSpec,
    FirWindow,
    Frame,
    IirDesign,
)
from ..utils.helpers import is_power_of_two
from ..utils.log import logger

Samples = Union[Frame, np.ndarray]


def _unwrap(x: Samples) -> np.ndarray:
    return x.data if isinstance(x, Frame) else np.asarray(x, dtype=np.float64)


def _rewrap(like: Samples, data: np.ndarray) -> Samples:
    return like.with_data(data) if isinstance(like, Frame) else data


# ==================== FFT 砖墙 ====================


def fft_lowpass(frame: Samples, cutoff: float) -> Samples:
    """FFT 砖墙低通

    Args:
        frame: 帧或样本数组，长度必须是 2 的幂
        cutoff: 归一化截止频率 (0, 0.5]；等于 0.5 时所有频点都通过，直接返回原样本

    Raises:
        NonPowerOfTwoLength: 长度不是 2 的幂
        InvalidSpec: cutoff 越界
    """
    x = _unwrap(frame)
    n = int(x.shape[0])
    if not is_power_of_two(n):
        raise NonPowerOfTwoLength(f"FFT 低通要求长度为 2 的幂: {n}")
    if not (0.0 < cutoff <= NYQUIST):
        raise InvalidSpec(f"cutoff 必须在 (0, 0.5] 内: {cutoff}")
    if cutoff >= NYQUIST:
        return _rewrap(frame, x.copy())

    spectrum = np.fft.rfft(x)
    spectrum[np.fft.rfftfreq(n) > cutoff] = 0.0
    return _rewrap(frame, np.fft.irfft(spectrum, n))


# ==================== 设计 ====================


def _window(spec: FilterSpec) -> np.ndarray:
    """对称窗（fftbins=False）"""
    taps = spec.fir_taps
    if spec.fir_window is FirWindow.RECTANGULAR:
        return sps.get_window("boxcar", taps, fftbins=False)
    if spec.fir_window is FirWindow.KAISER:
        return sps.get_window(("kaiser", spec.kaiser_beta), taps, fftbins=False)
    return sps.get_window(spec.fir_window.value, taps, fftbins=False)


def design_fir(spec: FilterSpec) -> DesignedFilter:
    """加窗 sinc 设计：h[k] = w[k] * sinc(2 * cutoff * (k - M))，归一化为单位直流增益

    Raises:
        InvalidSpec: 非 FIR 规格、偶数抽头或 cutoff 越界
    """
    if spec.kind is not FilterKind.FIR:
        raise InvalidSpec(f"design_fir 需要 FIR 规格，实际为 {spec.kind.value}")
    spec.validate()

    taps = spec.fir_taps
    m = (taps - 1) / 2.0
    k = np.arange(taps, dtype=np.float64)
    h = _window(spec) * np.sinc(2.0 * spec.cutoff * (k - m))
    # 逐位对称：(a + b) 与 (b + a) 在浮点下相同
    h = 0.5 * (h + h[::-1])
    total = h.sum()
    if total <= 0:
        raise InvalidSpec(f"设计出的 FIR 直流增益非正 ({total})，请增加抽头数或提高 cutoff")
    h = h / total
    h.setflags(write=False)
    return DesignedFilter(spec=spec, fir_coeffs=h)


def design_iir(spec: FilterSpec) -> DesignedFilter:
    """模拟原型 → 预畸变 → 双线性变换 → 二阶节级联

    奇数阶会包含一个一阶节（b2 = a2 = 0 的退化二阶节）。cutoff 为 0.5 时返回单个恒等节。

    Raises:
        InvalidSpec: 非 IIR 规格或参数非法
    """
    if spec.kind is not FilterKind.IIR:
        raise InvalidSpec(f"design_iir 需要 IIR 规格，实际为 {spec.kind.value}")
    spec.validate()

    if spec.cutoff >= NYQUIST:
        return DesignedFilter(spec=spec, biquads=(Biquad(1.0, 0.0, 0.0, 0.0, 0.0),))

    wn = 2.0 * spec.cutoff  # scipy 以奈奎斯特为 1
    if spec.iir_design is IirDesign.BUTTERWORTH:
        sos = sps.butter(spec.iir_order, wn, btype="low", output="sos")
    else:
        sos = sps.cheby1(spec.iir_order, spec.ripple_db, wn, btype="low", output="sos")

    biquads = []
    for row in sos:
        a0 = row[3]
        biquads.append(
            Biquad(
                b0=float(row[0] / a0),
                b1=float(row[1] / a0),
                b2=float(row[2] / a0),
                a1=float(row[4] / a0),
                a2=float(row[5] / a0),
            )
        )

    designed = DesignedFilter(spec=spec, biquads=tuple(biquads))
    radius = max(float(np.max(np.abs(bq.poles()))) for bq in designed.biquads)
    if radius >= 1.0:
        raise InvalidSpec(f"设计结果不稳定，最大极点半径 {radius:.6f}")
    logger.debug(f"[resample] IIR 设计完成: {spec.label}, {len(biquads)} 节, 最大极点半径 {radius:.4f}")
    return designed


@lru_cache(maxsize=256)
def design(spec: FilterSpec) -> DesignedFilter:
    """按 kind 分派设计；结果缓存且不可变，可在线程间共享"""
    if spec.kind is FilterKind.FIR:
        return design_fir(spec)
    if spec.kind is FilterKind.IIR:
        return design_iir(spec)
    spec.validate()
    return DesignedFilter(spec=spec)


def default_filter_spec(
    kind: FilterKind,
    rate: float,
    overrides: Optional[dict] = None,
) -> FilterSpec:
    """抗混叠默认规格：cutoff = rate * 0.5

    Args:
        kind: 滤波器类型
        rate: 采样率（保留比例）
        overrides: FilterSpec 字段覆盖（已经是正确类型的值）
    """
    spec = FilterSpec(kind=kind, cutoff=min(rate * NYQUIST, NYQUIST))
    if overrides:
        spec = replace(spec, **{k: v for k, v in overrides.items() if k not in ("kind", "cutoff")})
    return spec


# ==================== 应用 ====================


def apply_filter(x: Samples, f: DesignedFilter) -> Samples:
    """应用已设计的滤波器，输出与输入等长

    FIR：零填充边界的线性卷积，再前移群延迟 M 以与输入时间对齐；
    IIR：直接 II 型转置的二阶节级联单向滤波（因果，无延迟补偿）；
    FFT：砖墙低通。
    """
    data = _unwrap(x)
    n = int(data.shape[0])
    kind = f.spec.kind
    if kind is FilterKind.FIR:
        m = f.group_delay
        out = np.convolve(data, f.fir_coeffs)[m : m + n]
    elif kind is FilterKind.IIR:
        out = sps.sosfilt(f.sos, data)
    else:
        return fft_lowpass(x, f.spec.cutoff)
    return _rewrap(x, out)


# ==================== 频响 ====================


def frequency_response(f: DesignedFilter, freqs) -> np.ndarray:
    """在归一化频率点上求复频响 H(e^{j 2 pi f})"""
    freqs = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
    kind = f.spec.kind
    if kind is FilterKind.FIR:
        _, h = sps.freqz(f.fir_coeffs, 1.0, worN=freqs, fs=1.0)
        return h
    if kind is FilterKind.IIR:
        h = np.ones(freqs.shape, dtype=np.complex128)
        for bq in f.biquads:
            _, hs = sps.freqz([bq.b0, bq.b1, bq.b2], [1.0, bq.a1, bq.a2], worN=freqs, fs=1.0)
            h = h * hs
        return h
    return (np.abs(freqs) <= f.spec.cutoff).astype(np.complex128)


def response_table(f: DesignedFilter, points: int = RESPONSE_POINTS) -> list[tuple[float, float]]:
    """幅频表：频率 k / (2 * points)，k = 0..points-1，幅度单位 dB（下限 -300 dB）"""
    freqs = np.arange(points, dtype=np.float64) / (2.0 * points)
    mag = np.abs(frequency_response(f, freqs))
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag)
    db = np.maximum(np.nan_to_num(db, nan=MAGNITUDE_FLOOR_DB, neginf=MAGNITUDE_FLOOR_DB), MAGNITUDE_FLOOR_DB)
    return [(float(fr), float(v)) for fr, v in zip(freqs, db)]
