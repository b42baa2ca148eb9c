"""核心模块

OutputStore 依赖 utils，需从 core.state 单独导入。
"""

from .constants import (
    TOOL_NAME,
    DEFAULT_FRAME_LEN,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_DATA,
)
from .errors import (
    ResampleBenchError,
    WavError,
    MalformedRiff,
    UnsupportedCodec,
    UnsupportedDepth,
    NonFiniteSample,
    SignalError,
    EmptySignal,
    LengthMismatch,
    NonPowerOfTwoLength,
    ZeroReference,
    SpecError,
    InvalidSpec,
    InvalidRate,
    TooFewSamples,
    TooFewPoints,
    UnsortedPositions,
    InvalidSparsity,
    InvalidParams,
    BenchError,
    EmptyDataset,
    ConfigError,
    UsageError,
    StageError,
)
from .models import (
    AudioSignal,
    Frame,
    SampleMask,
    FilterKind,
    FirWindow,
    IirDesign,
    FilterSpec,
    Biquad,
    DesignedFilter,
    Transform,
    SplineBoundary,
    SplineSegments,
    ImatParams,
    EvalResult,
    Sampling,
    Recovery,
    Method,
    BenchConfig,
    BenchRecord,
    FilterStudyRow,
    format_snr,
    parse_snr,
)

__all__ = [
    # 常量
    "TOOL_NAME",
    "DEFAULT_FRAME_LEN",
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_DATA",
    # 异常
    "ResampleBenchError",
    "WavError",
    "MalformedRiff",
    "UnsupportedCodec",
    "UnsupportedDepth",
    "NonFiniteSample",
    "SignalError",
    "EmptySignal",
    "LengthMismatch",
    "NonPowerOfTwoLength",
    "ZeroReference",
    "SpecError",
    "InvalidSpec",
    "InvalidRate",
    "TooFewSamples",
    "TooFewPoints",
    "UnsortedPositions",
    "InvalidSparsity",
    "InvalidParams",
    "BenchError",
    "EmptyDataset",
    "ConfigError",
    "UsageError",
    "StageError",
    # 信号与采样
    "AudioSignal",
    "Frame",
    "SampleMask",
    # 滤波器
    "FilterKind",
    "FirWindow",
    "IirDesign",
    "FilterSpec",
    "Biquad",
    "DesignedFilter",
    # 重建
    "Transform",
    "SplineBoundary",
    "SplineSegments",
    "ImatParams",
    # 评估与基准
    "EvalResult",
    "Sampling",
    "Recovery",
    "Method",
    "BenchConfig",
    "BenchRecord",
    "FilterStudyRow",
    "format_snr",
    "parse_snr",
]
