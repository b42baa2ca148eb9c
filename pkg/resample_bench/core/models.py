"""数据模型定义"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from .constants import (
    DEFAULT_FIR_TAPS,
    DEFAULT_FRAME_LEN,
    DEFAULT_IIR_ORDER,
    DEFAULT_IMAT_ALPHA,
    DEFAULT_IMAT_ITERATIONS,
    DEFAULT_IMAT_LAMBDA,
    DEFAULT_KAISER_BETA,
    DEFAULT_RIPPLE_DB,
    INF_TOKEN,
    NYQUIST,
)
from .errors import ConfigError, InvalidParams, InvalidSpec, LengthMismatch


def format_snr(value: Optional[float]) -> str:
    """SNR 序列化：+inf 写作 "inf"，未评估写作空串"""
    if value is None:
        return ""
    if math.isinf(value) and value > 0:
        return INF_TOKEN
    return f"{value:.6f}"


def parse_snr(text: str) -> Optional[float]:
    """format_snr 的逆操作"""
    text = text.strip()
    if not text:
        return None
    if text == INF_TOKEN:
        return math.inf
    return float(text)


# ==================== 信号 ====================


@dataclass
class AudioSignal:
    """解码后的单声道信号"""

    samples: np.ndarray  # 幅度，名义范围 [-1, 1]
    sample_rate_hz: int
    source_bit_depth: int = 16
    source_channels: int = 1

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.sample_rate_hz <= 0:
            raise ValueError(f"sample_rate_hz 必须为正数: {self.sample_rate_hz}")

    def __len__(self) -> int:
        return int(self.samples.shape[0])


@dataclass(frozen=True)
class Frame:
    """定长帧，尾帧补零，valid_len 记录真实样本数"""

    data: np.ndarray
    index: int = 0
    valid_len: Optional[int] = None  # 缺省为整帧

    def __post_init__(self):
        n = int(np.shape(self.data)[0])
        if self.valid_len is None:
            object.__setattr__(self, "valid_len", n)
        elif not 0 <= self.valid_len <= n:
            raise LengthMismatch(f"有效长度 {self.valid_len} 超出帧长 {n}")

    @property
    def frame_len(self) -> int:
        return int(self.data.shape[0])

    @property
    def valid(self) -> np.ndarray:
        """去掉补零部分的样本"""
        return self.data[: self.valid_len]

    def with_data(self, data: np.ndarray) -> "Frame":
        """替换样本，保留序号和有效长度"""
        return replace(self, data=np.asarray(data, dtype=np.float64))

    @staticmethod
    def full(data, index: int = 0) -> "Frame":
        """整帧都是有效样本"""
        arr = np.asarray(data, dtype=np.float64)
        return Frame(data=arr, index=index, valid_len=int(arr.shape[0]))


@dataclass(frozen=True)
class SampleMask:
    """采样模式：保留的下标集合"""

    frame_len: int
    kept: np.ndarray  # 严格递增的下标
    rate: float  # 名义采样率 (0, 1]

    @property
    def count(self) -> int:
        return int(self.kept.shape[0])

    def as_bool(self) -> np.ndarray:
        """布尔形式，保留位置为 True"""
        flags = np.zeros(self.frame_len, dtype=bool)
        flags[self.kept] = True
        return flags


# ==================== 滤波器 ====================


class FilterKind(Enum):
    """抗混叠/恢复滤波器类型"""

    FFT_BRICKWALL = "fft"  # FFT 砖墙低通
    FIR = "fir"  # 加窗 sinc
    IIR = "iir"  # 双线性变换


class FirWindow(Enum):
    """FIR 窗函数"""

    RECTANGULAR = "rectangular"
    HAMMING = "hamming"
    BLACKMAN = "blackman"
    KAISER = "kaiser"


class IirDesign(Enum):
    """IIR 原型"""

    BUTTERWORTH = "butterworth"
    CHEBYSHEV1 = "chebyshev1"


@dataclass(frozen=True)
class FilterSpec:
    """声明式滤波器描述，cutoff 为归一化频率（0.5 即奈奎斯特）"""

    kind: FilterKind
    cutoff: float
    fir_window: FirWindow = FirWindow.HAMMING
    fir_taps: int = DEFAULT_FIR_TAPS
    kaiser_beta: float = DEFAULT_KAISER_BETA
    iir_design: IirDesign = IirDesign.BUTTERWORTH
    iir_order: int = DEFAULT_IIR_ORDER
    ripple_db: float = DEFAULT_RIPPLE_DB

    def validate(self) -> "FilterSpec":
        """校验不变量，非法时抛出 InvalidSpec"""
        if not (0.0 < self.cutoff <= NYQUIST):
            raise InvalidSpec(f"cutoff 必须在 (0, 0.5] 内: {self.cutoff}")
        if self.kind is FilterKind.FIR:
            if self.fir_taps < 1 or self.fir_taps % 2 == 0:
                raise InvalidSpec(f"FIR 抽头数必须为正奇数: {self.fir_taps}")
            if self.fir_window is FirWindow.KAISER and self.kaiser_beta < 0:
                raise InvalidSpec(f"Kaiser beta 不能为负: {self.kaiser_beta}")
        if self.kind is FilterKind.IIR:
            if self.iir_order < 1:
                raise InvalidSpec(f"IIR 阶数必须 >= 1: {self.iir_order}")
            if self.iir_design is IirDesign.CHEBYSHEV1 and self.ripple_db <= 0:
                raise InvalidSpec(f"切比雪夫纹波必须 > 0 dB: {self.ripple_db}")
        return self

    @property
    def label(self) -> str:
        """简短标签，用于文件名与报表"""
        if self.kind is FilterKind.FIR:
            window = self.fir_window.value
            if self.fir_window is FirWindow.KAISER:
                window = f"kaiser{self.kaiser_beta:g}"
            return f"fir-{window}-{self.fir_taps}"
        if self.kind is FilterKind.IIR:
            design = self.iir_design.value
            if self.iir_design is IirDesign.CHEBYSHEV1:
                design = f"chebyshev1r{self.ripple_db:g}"
            return f"iir-{design}-{self.iir_order}"
        return "fft"


@dataclass(frozen=True)
class Biquad:
    """二阶节 H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)"""

    b0: float
    b1: float
    b2: float
    a1: float
    a2: float

    def poles(self) -> np.ndarray:
        return np.roots([1.0, self.a1, self.a2])

    def as_sos_row(self) -> list[float]:
        return [self.b0, self.b1, self.b2, 1.0, self.a1, self.a2]


@dataclass(frozen=True)
class DesignedFilter:
    """已实现的滤波器系数，构造后不可变"""

    spec: FilterSpec
    fir_coeffs: Optional[np.ndarray] = None
    biquads: tuple[Biquad, ...] = ()

    @property
    def sos(self) -> np.ndarray:
        """scipy 的 (n_sections, 6) 二阶节矩阵"""
        return np.array([bq.as_sos_row() for bq in self.biquads], dtype=np.float64)

    @property
    def group_delay(self) -> int:
        """FIR 的群延迟 M = (taps - 1) / 2"""
        if self.fir_coeffs is None:
            return 0
        return (int(self.fir_coeffs.shape[0]) - 1) // 2


# ==================== 重建 ====================


class Transform(Enum):
    """IMAT 稀疏变换域"""

    DFT = "dft"
    DCT = "dct"


class SplineBoundary(Enum):
    """样条端点条件"""

    NOT_A_KNOT = "not-a-knot"
    NATURAL = "natural"


@dataclass(frozen=True)
class SplineSegments:
    """分段三次多项式

    第 i 段在 [x_i, x_{i+1}] 上为 a + b t + c t^2 + d t^3，t = x - x_i（局部坐标）。
    coeffs 形状为 (段数, 4)，列顺序 (a, b, c, d)。
    """

    knots: np.ndarray
    coeffs: np.ndarray
    boundary: SplineBoundary = SplineBoundary.NOT_A_KNOT

    @property
    def segment_count(self) -> int:
        return int(self.coeffs.shape[0])


@dataclass(frozen=True)
class ImatParams:
    """IMAT/IMATI 参数

    阈值序列 T_k = beta * exp(-alpha * k)。beta 为 None 时取零填充观测的最大变换幅度。
    """

    lam: float = DEFAULT_IMAT_LAMBDA  # 松弛因子 lambda
    beta: Optional[float] = None
    alpha: float = DEFAULT_IMAT_ALPHA
    iterations: int = DEFAULT_IMAT_ITERATIONS
    transform: Transform = Transform.DFT

    def validate(self) -> "ImatParams":
        if not (0.0 < self.lam < 2.0):
            raise InvalidParams(f"lambda 必须在 (0, 2) 内: {self.lam}")
        if self.beta is not None and self.beta <= 0:
            raise InvalidParams(f"beta 必须 > 0: {self.beta}")
        if self.alpha <= 0:
            raise InvalidParams(f"alpha 必须 > 0: {self.alpha}")
        if self.iterations < 1:
            raise InvalidParams(f"迭代次数必须 >= 1: {self.iterations}")
        return self

    def threshold(self, beta: float, k: int) -> float:
        return beta * math.exp(-self.alpha * k)


# ==================== 评估与基准 ====================


@dataclass(frozen=True)
class EvalResult:
    """单次评估结果；snr_db 为 None 表示参考帧静音、未评估"""

    snr_db: Optional[float]
    elapsed_seconds: float
    samples_evaluated: int
    filter_seconds: float = 0.0  # 抗混叠耗时，单独计时


class Sampling(Enum):
    UNIFORM = "uniform"
    RANDOM = "random"


class Recovery(Enum):
    SPLINE = "spline"
    LOWPASS = "lowpass"
    IMAT = "imat"
    IMATI = "imati"


class Method(Enum):
    """采样与恢复方案"""

    U_AF_FFT_SP = "U-AF-FFT-Sp"
    U_AF_FFT = "U-AF-FFT"
    U_AF_FIR_SP = "U-AF-FIR-Sp"
    U_AF_FIR = "U-AF-FIR"
    U_AF_IIR_SP = "U-AF-IIR-Sp"
    R_IMATI = "R-IMATI"
    R_SP = "R-Sp"
    R_IMAT = "R-IMAT"

    @property
    def sampling(self) -> Sampling:
        return Sampling.UNIFORM if self.value.startswith("U-") else Sampling.RANDOM

    @property
    def anti_alias(self) -> Optional[FilterKind]:
        """均匀采样前的抗混叠滤波器；随机采样没有"""
        if "-FFT" in self.value:
            return FilterKind.FFT_BRICKWALL
        if "-FIR" in self.value:
            return FilterKind.FIR
        if "-IIR" in self.value:
            return FilterKind.IIR
        return None

    @property
    def recovery(self) -> Recovery:
        if self.value.endswith("-Sp"):
            return Recovery.SPLINE
        if self is Method.R_IMATI:
            return Recovery.IMATI
        if self is Method.R_IMAT:
            return Recovery.IMAT
        return Recovery.LOWPASS


@dataclass(frozen=True)
class BenchConfig:
    """一次基准测试的完整配置（不可变）"""

    dataset_dir: Path
    output_dir: Path
    rates: tuple[float, ...]
    methods: tuple[Method, ...]
    frame_len: int = DEFAULT_FRAME_LEN
    seed: int = 0
    threads: int = 1
    timing_repeats: int = 1
    timing_include_filter: bool = False  # 耗时是否计入抗混叠
    no_timing: bool = False
    filter_overrides: dict = field(default_factory=dict)
    imat: ImatParams = field(default_factory=ImatParams)
    spline_boundary: SplineBoundary = SplineBoundary.NOT_A_KNOT
    pesq_command: Optional[str] = None

    def __post_init__(self):
        if not self.rates:
            raise ConfigError("rates 不能为空")
        for rate in self.rates:
            if not (0.0 < rate <= 1.0):
                raise ConfigError(f"采样率必须在 (0, 1] 内: {rate}")
        if not self.methods:
            raise ConfigError("methods 不能为空")
        if self.frame_len < 1 or self.frame_len & (self.frame_len - 1):
            raise ConfigError(f"frame_len 必须是 2 的幂: {self.frame_len}")
        if self.threads < 1:
            raise ConfigError(f"threads 必须 >= 1: {self.threads}")
        if self.timing_repeats < 1:
            raise ConfigError(f"timing.repeats 必须 >= 1: {self.timing_repeats}")
        try:
            self.imat.validate()
        except InvalidParams as e:
            raise ConfigError(str(e)) from e


@dataclass(frozen=True)
class BenchRecord:
    """结果表中的一行：(文件, 方法, 采样率) 唯一"""

    file: str
    method: str
    rate: float
    snr_db: float
    elapsed_seconds: float
    seed: int
    pesq: Optional[float] = None

    @property
    def sort_key(self) -> tuple:
        return (self.file, self.method, self.rate)

    def to_row(self, include_timing: bool = True, include_pesq: bool = False) -> list[str]:
        """按 results.csv 列顺序序列化"""
        row = [self.file, self.method, f"{self.rate:.6f}", format_snr(self.snr_db)]
        if include_timing:
            row.append(f"{self.elapsed_seconds:.6f}")
        row.append(str(self.seed))
        if include_pesq:
            row.append("" if self.pesq is None else f"{self.pesq:.6f}")
        return row

    @staticmethod
    def from_dict(d: dict) -> "BenchRecord":
        snr = d.get("snr_db", "")
        pesq = d.get("pesq")
        return BenchRecord(
            file=d["file"],
            method=d["method"],
            rate=float(d["rate"]),
            snr_db=parse_snr(snr) if isinstance(snr, str) else float(snr),
            elapsed_seconds=float(d.get("elapsed_seconds") or 0.0),
            seed=int(d.get("seed", 0)),
            pesq=float(pesq) if pesq not in (None, "") else None,
        )


@dataclass(frozen=True)
class FilterStudyRow:
    """滤波器对比实验的一行"""

    file: str
    filter_label: str
    rate: float
    snr_db: float

    def to_row(self) -> list[str]:
        return [self.file, self.filter_label, f"{self.rate:.6f}", format_snr(self.snr_db)]
