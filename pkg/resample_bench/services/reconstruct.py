"""重建服务 - 从采样帧恢复整帧

- recover_lowpass：零填充帧乘 1/rate 后做 FFT 砖墙低通
- spline_interpolate：以保留下标为节点的三次样条（默认 not-a-knot 端点）
- imat：数据一致性步 + 变换域硬阈值，阈值按 T_k = beta * exp(-alpha * k) 衰减
- imati：同 imat，但一致性步把残差用三次样条插值到全部下标
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from scipy import fft as spfft
from scipy.interpolate import CubicSpline, PPoly

from ..core.constants import (
    DEFAULT_SPARSE_K,
    DEFAULT_SPARSE_N,
    IMATI_SPREAD_SCALES,
    MIN_SPLINE_POINTS,
    NYQUIST,
    SPARSE_AMP_MIN,
)
from ..core.errors import (
    InvalidSparsity,
    LengthMismatch,
    SpecError,
    TooFewPoints,
    UnsortedPositions,
)
from ..core.models import Frame, ImatParams, SampleMask, SplineBoundary, SplineSegments, Transform
from ..utils.log import logger
from .filters import fft_lowpass


# ==================== 低通恢复 ====================


def recover_lowpass(sampled: Frame, mask: SampleMask) -> Frame:
    """零填充帧乘 1/rate，再以 rate * 0.5 为截止频率做砖墙低通"""
    scaled = sampled.with_data(sampled.data / mask.rate)
    return fft_lowpass(scaled, min(mask.rate * NYQUIST, NYQUIST))


# ==================== 三次样条 ====================


def fit_spline(
    positions,
    values,
    boundary: SplineBoundary = SplineBoundary.NOT_A_KNOT,
) -> SplineSegments:
    """拟合分段三次多项式

    Raises:
        TooFewPoints: 少于 4 个节点
        UnsortedPositions: 节点不是严格递增
        LengthMismatch: 位置与取值个数不同
    """
    x = np.asarray(positions, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if x.shape != y.shape:
        raise LengthMismatch(f"节点数 {x.shape[0]} 与取值数 {y.shape[0]} 不一致")
    if x.shape[0] < MIN_SPLINE_POINTS:
        raise TooFewPoints(f"三次样条至少需要 {MIN_SPLINE_POINTS} 个节点，实际 {x.shape[0]}")
    if np.any(np.diff(x) <= 0):
        raise UnsortedPositions("样条节点必须严格递增")

    cs = CubicSpline(x, y, bc_type=boundary.value, extrapolate=True)
    # scipy 按降幂存储 (d, c, b, a)，这里转成 (a, b, c, d)
    return SplineSegments(knots=x, coeffs=cs.c[::-1].T.copy(), boundary=boundary)


def evaluate_spline(segments: SplineSegments, x) -> np.ndarray:
    """求值；节点区间外用首/末段多项式外推"""
    poly = PPoly(segments.coeffs.T[::-1], segments.knots, extrapolate=True)
    return poly(np.asarray(x, dtype=np.float64))


def spline_interpolate(
    positions,
    values,
    query_len: int,
    boundary: SplineBoundary = SplineBoundary.NOT_A_KNOT,
) -> Frame:
    """在整数网格 0..query_len-1 上求样条值

    Raises:
        TooFewPoints, UnsortedPositions: 见 fit_spline
        SpecError: 节点不在 [0, query_len) 内
    """
    x = np.asarray(positions, dtype=np.float64)
    if x.size and (x[0] < 0 or x[-1] >= query_len):
        raise SpecError(f"样条节点必须位于 [0, {query_len}) 内")
    segments = fit_spline(x, values, boundary)
    grid = np.arange(query_len, dtype=np.float64)
    return Frame.full(evaluate_spline(segments, grid))


# ==================== IMAT / IMATI ====================


def _forward(x: np.ndarray, transform: Transform) -> np.ndarray:
    if transform is Transform.DCT:
        return spfft.dct(x, type=2, norm="ortho")
    return np.fft.rfft(x)


def _inverse(coeffs: np.ndarray, transform: Transform, n: int) -> np.ndarray:
    if transform is Transform.DCT:
        return spfft.idct(coeffs, type=2, norm="ortho")
    return np.fft.irfft(coeffs, n)


def resolve_beta(p: ImatParams, observation: np.ndarray) -> float:
    """初始阈值：显式配置的 beta，否则取零填充观测的最大变换幅度"""
    if p.beta is not None:
        return float(p.beta)
    return float(np.max(np.abs(_forward(observation, p.transform))))


def _shrink(x: np.ndarray, p: ImatParams, threshold: float) -> np.ndarray:
    """变换域硬阈值：幅度低于 threshold 的系数置零"""
    coeffs = _forward(x, p.transform)
    coeffs[np.abs(coeffs) < threshold] = 0.0
    return _inverse(coeffs, p.transform, int(x.shape[0]))


def _iterate(
    sampled: Frame,
    mask: SampleMask,
    p: ImatParams,
    step: Callable[[np.ndarray, np.ndarray, float], np.ndarray],
) -> Frame:
    """IMAT 主循环，step(x, y, threshold) 完成一致性步与阈值步，返回新的估计"""
    p.validate()
    y = sampled.data
    n = int(y.shape[0])
    if mask.frame_len != n:
        raise LengthMismatch(f"采样模式长度 {mask.frame_len} 与帧长 {n} 不一致")

    beta = resolve_beta(p, y)
    x = np.zeros(n, dtype=np.float64)
    if beta > 0:
        for k in range(p.iterations):
            x = step(x, y, p.threshold(beta, k))

    # 观测值无噪声，最后用已知样本覆盖
    x[mask.kept] = y[mask.kept]
    return sampled.with_data(x)


def imat(sampled: Frame, mask: SampleMask, p: Optional[ImatParams] = None) -> Frame:
    """IMAT：x <- x + lambda * M(y - x)，随后变换域硬阈值"""
    p = p or ImatParams()
    keep = mask.as_bool()

    def masked_step(x: np.ndarray, y: np.ndarray, threshold: float) -> np.ndarray:
        return _shrink(x + p.lam * np.where(keep, y - x, 0.0), p, threshold)

    return _iterate(sampled, mask, p, masked_step)


def imati(
    sampled: Frame,
    mask: SampleMask,
    p: Optional[ImatParams] = None,
    boundary: SplineBoundary = SplineBoundary.NOT_A_KNOT,
) -> Frame:
    """IMATI：一致性步用三次样条把保留位置上的残差插值到所有下标

    插值只在节点凸包 [kept[0], kept[-1]] 内展开，凸包外不外推。
    每步按 IMATI_SPREAD_SCALES 依次缩小插值部分：阈值后保留位置上的残差
    不大于纯 IMAT 步的残差才接受，全部不合格时取 IMAT 步。

    Raises:
        TooFewPoints: 保留样本少于 4 个
    """
    p = p or ImatParams()
    n = mask.frame_len
    if mask.count < MIN_SPLINE_POINTS:
        raise TooFewPoints(f"IMATI 至少需要 {MIN_SPLINE_POINTS} 个保留样本，实际 {mask.count}")
    keep = mask.as_bool()
    knots = mask.kept.astype(np.float64)
    hull = np.arange(mask.kept[0], mask.kept[-1] + 1)
    # 只在凸包内的缺失位置上展开
    spread_at = hull[~keep[hull]]

    def kept_error(x: np.ndarray, y: np.ndarray) -> float:
        return float(np.linalg.norm(y[keep] - x[keep]))

    def interpolated_step(x: np.ndarray, y: np.ndarray, threshold: float) -> np.ndarray:
        residual = y - x
        base = x + p.lam * np.where(keep, residual, 0.0)
        fallback = _shrink(base, p, threshold)
        if spread_at.size == 0:
            return fallback

        segments = fit_spline(knots, residual[keep], boundary)
        spread = np.zeros(n, dtype=np.float64)
        spread[spread_at] = p.lam * evaluate_spline(segments, spread_at.astype(np.float64))
        limit = kept_error(fallback, y)
        for scale in IMATI_SPREAD_SCALES:
            candidate = _shrink(base + scale * spread, p, threshold)
            if kept_error(candidate, y) <= limit:
                return candidate
        return fallback

    return _iterate(sampled, mask, p, interpolated_step)


# ==================== 测试信号 ====================


def sparse_test_spectrum(
    n: int = DEFAULT_SPARSE_N,
    k: int = DEFAULT_SPARSE_K,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """稀疏频谱的支撑集与幅度

    支撑集取自 1..n/2-1（不含直流和奈奎斯特），保证实信号的 DFT 恰有 2k 个非零频点。

    Raises:
        InvalidSparsity: k < 0 或 k >= n/2
    """
    if k < 0 or k >= n // 2:
        raise InvalidSparsity(f"稀疏度必须满足 0 <= k < n/2: k={k}, n={n}")
    rng = np.random.default_rng(seed)
    support = np.sort(rng.choice(np.arange(1, n // 2), size=k, replace=False))
    magnitudes = rng.uniform(SPARSE_AMP_MIN, 1.0, size=k)
    signs = rng.choice(np.array([-1.0, 1.0]), size=k)
    return support, magnitudes * signs


def sparse_test_signal(
    n: int = DEFAULT_SPARSE_N,
    k: int = DEFAULT_SPARSE_K,
    seed: int = 0,
) -> Frame:
    """k 稀疏（DFT 域）的人工实信号：共轭对称频谱做逆 DFT"""
    support, amplitudes = sparse_test_spectrum(n, k, seed)
    spectrum = np.zeros(n // 2 + 1, dtype=np.complex128)
    spectrum[support] = amplitudes
    return Frame.full(np.fft.irfft(spectrum, n))


def lowpass_test_signal(
    n: int = DEFAULT_SPARSE_N,
    tones: int = 5,
    max_freq: float = 0.15,
    seed: int = 0,
    bin_aligned: bool = False,
) -> Frame:
    """低通测试信号：若干余弦之和，频率低于 max_freq，幅度随频率排序递减，峰值归一到 0.9

    Args:
        n: 长度
        tones: 余弦个数
        max_freq: 最高归一化频率
        seed: 随机种子
        bin_aligned: 频率对齐到 DFT 频点 k/n（帧内周期信号）
    """
    rng = np.random.default_rng(seed)
    freqs = np.sort(rng.uniform(1.0 / n, max_freq, size=tones))
    if bin_aligned:
        freqs = np.maximum(np.floor(freqs * n), 1.0) / n
    phases = rng.uniform(0.0, 2.0 * np.pi, size=tones)
    amplitudes = 1.0 / (1.0 + np.arange(tones))

    t = np.arange(n, dtype=np.float64)
    x = np.sum(amplitudes[:, None] * np.cos(2.0 * np.pi * freqs[:, None] * t + phases[:, None]), axis=0)
    peak = float(np.max(np.abs(x)))
    if peak > 0:
        x = 0.9 * x / peak
    logger.debug(f"[resample] 低通测试信号: n={n}, 频率={np.round(freqs, 4).tolist()}")
    return Frame.full(x)
