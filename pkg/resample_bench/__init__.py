"""resample_bench - 音频帧采样与恢复方案的基准测试工具"""

__version__ = "1.0.1"
