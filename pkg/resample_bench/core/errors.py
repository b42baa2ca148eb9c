"""异常定义

所有库代码抛出的异常都继承自 ResampleBenchError，命令行层负责把它们映射为退出码。
"""

from __future__ import annotations

from typing import Optional


class ResampleBenchError(Exception):
    """工具异常基类"""


# ==================== WAV 读写 ====================


class WavError(ResampleBenchError):
    """WAV 编解码异常"""


class MalformedRiff(WavError):
    """RIFF 容器结构损坏（缺少块或数据被截断）"""


class UnsupportedCodec(WavError):
    """非 PCM 编码"""


class UnsupportedDepth(WavError):
    """不支持的位深"""


class NonFiniteSample(WavError):
    """样本包含 NaN 或无穷大"""


# ==================== 信号 ====================


class SignalError(ResampleBenchError):
    """信号形状或内容异常"""


class EmptySignal(SignalError):
    """空信号"""


class LengthMismatch(SignalError):
    """长度不一致"""


class NonPowerOfTwoLength(SignalError):
    """帧长不是 2 的幂"""


class ZeroReference(SignalError):
    """参考信号全零，SNR 无定义"""


# ==================== 参数 ====================


class SpecError(ResampleBenchError):
    """参数或规格非法"""


class InvalidSpec(SpecError):
    """滤波器规格非法"""


class InvalidRate(SpecError):
    """采样率不在 (0, 1] 内"""


class TooFewSamples(SpecError):
    """随机采样保留的样本过少"""


class TooFewPoints(SpecError):
    """样条插值点过少"""


class UnsortedPositions(SpecError):
    """样条位置未严格递增"""


class InvalidSparsity(SpecError):
    """稀疏度非法"""


class InvalidParams(SpecError):
    """IMAT 参数非法"""


# ==================== 基准测试 ====================


class BenchError(ResampleBenchError):
    """基准测试流程异常"""


class EmptyDataset(BenchError):
    """数据集中没有可用的 WAV 文件"""


class ConfigError(BenchError):
    """配置文件缺失或取值非法"""


class UsageError(BenchError):
    """命令行用法错误"""


class StageError(BenchError):
    """流水线某一阶段失败，附带 (文件, 帧序号, 方法) 定位信息"""

    def __init__(
        self,
        cause: Exception,
        method: str,
        frame_index: Optional[int] = None,
        file: str = "",
    ):
        self.cause = cause
        self.method = method
        self.frame_index = frame_index
        self.file = file
        super().__init__(self._describe())

    def _describe(self) -> str:
        where = f"file={self.file or '-'}, frame={self.frame_index}, method={self.method}"
        return f"{type(self.cause).__name__}: {self.cause} ({where})"

    def with_file(self, file: str) -> "StageError":
        """补充文件名（帧级流水线不知道文件名，由上层补齐）"""
        self.file = file
        self.args = (self._describe(),)
        return self
