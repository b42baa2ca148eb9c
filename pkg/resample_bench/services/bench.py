"""基准测试服务 - 采样/恢复方案矩阵的编排与持久化

每个 (文件, 方法, 采样率) 组合：分帧 → 逐帧流水线 → 拼接 → 整段 SNR 与耗时之和。
抗混叠按帧进行；SNR 以未经滤波的原始信号为参考；计时只覆盖采样与恢复（可配置计入抗混叠），不含指标计算。
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..core.constants import DEFAULT_FRAME_LEN
from ..core.errors import (
    EmptyDataset,
    ResampleBenchError,
    SpecError,
    StageError,
    ZeroReference,
)
from ..core.models import (
    AudioSignal,
    BenchConfig,
    BenchRecord,
    EvalResult,
    FilterKind,
    FilterSpec,
    FilterStudyRow,
    FirWindow,
    Frame,
    IirDesign,
    ImatParams,
    Method,
    Recovery,
    SampleMask,
    Sampling,
    SplineBoundary,
)
from ..core.state import OutputStore, write_csv
from ..utils.helpers import list_wav_files
from ..utils.log import logger
from .filters import apply_filter, default_filter_spec, design
from .framing import merge_frames, split_frames
from .metrics import mean_elapsed_by_method, normalized_times, run_pesq, snr_db, timed_median
from .reconstruct import (
    imat,
    imati,
    lowpass_test_signal,
    recover_lowpass,
    sparse_test_signal,
    spline_interpolate,
)
from .render import RenderService
from .sampling import apply_mask, frame_seed, make_mask, uniform_mask, random_mask
from .wav_io import load_wav, save_wav


# ==================== 单帧流水线 ====================


def _recover(
    recovery: Recovery,
    sampled: Frame,
    mask: SampleMask,
    imat_params: ImatParams,
    boundary: SplineBoundary,
) -> Frame:
    if recovery is Recovery.SPLINE:
        values = sampled.data[mask.kept]
        return sampled.with_data(spline_interpolate(mask.kept, values, mask.frame_len, boundary).data)
    if recovery is Recovery.LOWPASS:
        return recover_lowpass(sampled, mask)
    if recovery is Recovery.IMAT:
        return imat(sampled, mask, imat_params)
    return imati(sampled, mask, imat_params, boundary)


def _run_stages(
    x: Frame,
    sampling: Sampling,
    recovery: Recovery,
    rate: float,
    seed: int,
    imat_params: ImatParams,
    boundary: SplineBoundary,
) -> Frame:
    """采样模式 → 置零 → 恢复；x 为已经过抗混叠的帧"""
    mask = make_mask(sampling, x.frame_len, rate, frame_seed(seed, x.index))
    sampled = apply_mask(x, mask)
    return _recover(recovery, sampled, mask, imat_params, boundary)


def _evaluate(frame: Frame, recovered: Frame, elapsed: float, filter_seconds: float = 0.0) -> EvalResult:
    """在有效长度上计算 SNR；静音参考帧不评估"""
    try:
        snr = snr_db(frame.valid, recovered.valid)
    except ZeroReference:
        snr = None
    return EvalResult(
        snr_db=snr,
        elapsed_seconds=elapsed,
        samples_evaluated=frame.valid_len,
        filter_seconds=filter_seconds,
    )


def run_pipeline(
    frame: Frame,
    method: Union[Method, str],
    rate: float,
    seed: int = 0,
    config: Optional[BenchConfig] = None,
    anti_alias: Optional[FilterSpec] = None,
) -> tuple[Frame, EvalResult]:
    """对单帧执行一个方案

    Args:
        frame: 原始帧
        method: 方案标识
        rate: 采样率 (0, 1]
        seed: 基础种子，逐帧种子为 seed XOR 帧序号
        config: 提供滤波器覆盖、IMAT 参数、样条端点与计时选项；为 None 时全部取默认值
        anti_alias: 显式指定抗混叠滤波器（滤波器对比实验使用），覆盖方案默认的滤波器

    Returns:
        (重建帧, 评估结果)。elapsed_seconds 只含采样与恢复，抗混叠耗时记在 filter_seconds；
        config.timing_include_filter 为真时 elapsed_seconds 也计入抗混叠

    Raises:
        StageError: 任一阶段失败，附带帧序号与方法
    """
    method = Method(method)
    if config is not None and method not in config.methods:
        raise StageError(SpecError(f"方案 {method.value} 不在配置的 methods 中"), method.value, frame.index)

    overrides = config.filter_overrides if config else {}
    imat_params = config.imat if config else ImatParams()
    boundary = config.spline_boundary if config else SplineBoundary.NOT_A_KNOT
    repeats = config.timing_repeats if config else 1
    include_filter = config.timing_include_filter if config else False

    try:
        spec = anti_alias
        if spec is None and method.anti_alias is not None:
            spec = default_filter_spec(method.anti_alias, rate, overrides)
        filtered, filter_seconds = frame, 0.0
        if spec is not None:
            filtered, filter_seconds = timed_median(lambda: apply_filter(frame, design(spec)), repeats)
        recovered, elapsed = timed_median(
            lambda: _run_stages(filtered, method.sampling, method.recovery, rate, seed, imat_params, boundary),
            repeats,
        )
        if include_filter:
            elapsed += filter_seconds
    except StageError:
        raise
    except (ResampleBenchError, ValueError) as e:
        raise StageError(e, method.value, frame.index) from e

    result = _evaluate(frame, recovered, elapsed, filter_seconds)
    logger.debug(
        f"[resample] 帧 {frame.index} {method.value} r={rate:g}: "
        f"snr={result.snr_db}, {elapsed * 1e3:.2f} ms"
    )
    return recovered, result


# ==================== 整段信号 ====================


def recover_signal(
    signal: AudioSignal,
    method: Union[Method, str],
    rate: float,
    config: Optional[BenchConfig] = None,
    anti_alias: Optional[FilterSpec] = None,
) -> tuple[np.ndarray, float, float]:
    """逐帧执行方案并拼接

    Returns:
        (重建样本, 整段 SNR, 各帧耗时之和)

    Raises:
        ZeroReference: 整段信号全零
        StageError: 某帧失败
    """
    frame_len = config.frame_len if config else DEFAULT_FRAME_LEN
    seed = config.seed if config else 0
    frames = split_frames(signal, frame_len)

    outputs = []
    total = 0.0
    for frame in frames:
        recovered, result = run_pipeline(frame, method, rate, seed, config, anti_alias)
        outputs.append(recovered)
        total += result.elapsed_seconds
    samples = merge_frames(outputs, len(signal))
    return samples, snr_db(signal.samples, samples), total


def _run_file(path: Path, config: BenchConfig, store: OutputStore) -> list[BenchRecord]:
    """单个文件的全部 (方法, 采样率) 组合"""
    signal = load_wav(path)
    if not np.any(signal.samples):
        raise ZeroReference(f"{path.name} 全部为零，SNR 无定义")
    logger.info(
        f"[resample] 处理 {path.name}: {len(signal)} 样本, {signal.sample_rate_hz} Hz, "
        f"{signal.source_bit_depth} 位 x{signal.source_channels}"
    )

    records = []
    for method in config.methods:
        for rate in config.rates:
            samples, snr, elapsed = recover_signal(signal, method, rate, config)
            out_path = save_wav(
                store.recovered_path(path.name, method.value, rate),
                AudioSignal(samples, signal.sample_rate_hz),
            )
            pesq = run_pesq(config.pesq_command, path, out_path) if config.pesq_command else None
            records.append(
                BenchRecord(
                    file=path.name,
                    method=method.value,
                    rate=rate,
                    snr_db=snr,
                    elapsed_seconds=0.0 if config.no_timing else elapsed,
                    seed=config.seed,
                    pesq=pesq,
                )
            )
    return records


def _run_file_safely(path: Path, config: BenchConfig, store: OutputStore) -> Optional[list[BenchRecord]]:
    """失败时记录日志并返回 None"""
    try:
        return _run_file(path, config, store)
    except StageError as e:
        logger.error(f"[resample] 跳过文件: {e.with_file(path.name)}")
    except (ResampleBenchError, OSError) as e:
        logger.warning(f"[resample] 跳过文件 {path.name}: {type(e).__name__}: {e}")
    return None


def run_bench(config: BenchConfig, render: Optional[RenderService] = None) -> list[BenchRecord]:
    """运行完整实验矩阵并写出全部产物

    Returns:
        按 (file, method, rate) 排序的记录

    Raises:
        EmptyDataset: 没有 WAV 文件，或所有文件都失败
    """
    files = list_wav_files(config.dataset_dir)
    if not files:
        raise EmptyDataset(f"数据集目录中没有 WAV 文件: {config.dataset_dir}")

    store = OutputStore(config.output_dir).ensure()
    logger.info(
        f"[resample] 开始测试: {len(files)} 个文件 x {len(config.methods)} 个方案 x "
        f"{len(config.rates)} 个采样率, 线程数 {config.threads}"
    )

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            outcomes = list(pool.map(lambda p: _run_file_safely(p, config, store), files))
    else:
        outcomes = [_run_file_safely(p, config, store) for p in files]

    failed = sum(1 for o in outcomes if o is None)
    records = sorted((r for o in outcomes if o for r in o), key=lambda r: r.sort_key)
    if not records:
        raise EmptyDataset(f"全部 {len(files)} 个文件都处理失败")
    if failed:
        logger.warning(f"[resample] {failed}/{len(files)} 个文件被跳过")

    include_timing = not config.no_timing
    store.write_results(records, include_timing, include_pesq=bool(config.pesq_command))
    store.write_plot_data(records)
    if include_timing:
        store.write_cpu_time(mean_elapsed_by_method(records), normalized_times(records))

    render = render or RenderService()
    store.write_summary(render.summary_text(records, include_timing))
    return records


# ==================== 滤波器对比实验 ====================


def study_filters(rate: float, overrides: Optional[dict] = None) -> list[FilterSpec]:
    """对比用的抗混叠滤波器：四种 FIR 窗与两种 IIR 原型，cutoff = rate * 0.5"""
    fir = default_filter_spec(FilterKind.FIR, rate, overrides)
    iir = default_filter_spec(FilterKind.IIR, rate, overrides)
    return [replace(fir, fir_window=w) for w in FirWindow] + [replace(iir, iir_design=d) for d in IirDesign]


def run_filter_study(config: BenchConfig) -> list[FilterStudyRow]:
    """均匀采样 + 样条恢复下比较不同抗混叠滤波器，写出 filter_study.csv

    Raises:
        EmptyDataset: 没有 WAV 文件，或所有文件都失败
    """
    files = list_wav_files(config.dataset_dir)
    if not files:
        raise EmptyDataset(f"数据集目录中没有 WAV 文件: {config.dataset_dir}")

    # 借用 U-AF-FIR-Sp 的流水线形状，滤波器由 anti_alias 参数替换
    study_config = replace(config, methods=(Method.U_AF_FIR_SP,))
    rows = []
    for path in files:
        try:
            signal = load_wav(path)
            file_rows = []
            for rate in config.rates:
                for spec in study_filters(rate, config.filter_overrides):
                    _, snr, _ = recover_signal(signal, Method.U_AF_FIR_SP, rate, study_config, spec)
                    file_rows.append(FilterStudyRow(path.name, spec.label, rate, snr))
            rows.extend(file_rows)
        except StageError as e:
            logger.error(f"[resample] 跳过文件: {e.with_file(path.name)}")
        except (ResampleBenchError, OSError) as e:
            logger.warning(f"[resample] 跳过文件 {path.name}: {type(e).__name__}: {e}")

    if not rows:
        raise EmptyDataset(f"全部 {len(files)} 个文件都处理失败")
    OutputStore(config.output_dir).write_filter_study(rows)
    return rows


# ==================== 合成数据 ====================


def make_corpus(
    out_dir: Union[str, Path],
    files: int = 2,
    seconds: float = 0.5,
    sample_rate: int = 44100,
    seed: int = 0,
) -> list[Path]:
    """生成确定性的 16 位低通测试 WAV（corpus_00.wav, corpus_01.wav, ...）"""
    out_dir = Path(out_dir)
    n = max(1, int(round(seconds * sample_rate)))
    paths = []
    for i in range(files):
        frame = lowpass_test_signal(n, tones=5, max_freq=0.15, seed=seed + i)
        path = save_wav(out_dir / f"corpus_{i:02d}.wav", AudioSignal(frame.data, sample_rate))
        paths.append(path)
    logger.info(f"[resample] 已生成 {len(paths)} 个测试文件: {out_dir}")
    return paths


# ==================== 稀疏信号演示 ====================


@dataclass
class SparseDemo:
    """稀疏信号上样条与 IMAT 的对比结果"""

    original: np.ndarray
    sampled: np.ndarray  # 均匀采样后置零
    spline: np.ndarray  # 均匀采样 + 样条
    imat: np.ndarray  # 随机采样 + IMAT
    spline_snr_db: float
    imat_snr_db: float

    def rows(self) -> list[list[str]]:
        return [
            [str(i), f"{a:.9f}", f"{b:.9f}", f"{c:.9f}", f"{d:.9f}"]
            for i, (a, b, c, d) in enumerate(zip(self.original, self.sampled, self.spline, self.imat))
        ]

    def write_csv(self, path: Union[str, Path]) -> Path:
        return write_csv(path, ["index", "original", "sampled", "spline", "imat"], self.rows())


def run_sparse_demo(
    n: int = 1024,
    k: int = 64,
    seed: int = 0,
    rate: float = 0.5,
    imat_params: Optional[ImatParams] = None,
    boundary: SplineBoundary = SplineBoundary.NOT_A_KNOT,
) -> SparseDemo:
    """k 稀疏信号：均匀采样后样条插值，对比随机采样后 IMAT 恢复"""
    frame = sparse_test_signal(n, k, seed)
    mask = uniform_mask(n, rate)
    sampled = apply_mask(frame, mask)
    spline = spline_interpolate(mask.kept, frame.data[mask.kept], n, boundary)

    random = random_mask(n, rate, seed)
    recovered = imat(apply_mask(frame, random), random, imat_params)

    demo = SparseDemo(
        original=frame.data,
        sampled=sampled.data,
        spline=spline.data,
        imat=recovered.data,
        spline_snr_db=snr_db(frame.data, spline.data),
        imat_snr_db=snr_db(frame.data, recovered.data),
    )
    logger.info(
        f"[resample] 稀疏演示 n={n}, k={k}, r={rate:g}: "
        f"样条 {demo.spline_snr_db:.2f} dB, IMAT {demo.imat_snr_db:.2f} dB"
    )
    return demo
