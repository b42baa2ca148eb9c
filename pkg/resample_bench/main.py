"""
重采样基准 - 音频帧的采样与恢复方案对比工具

把音频切成 1024 点帧，对每帧做均匀采样（先抗混叠）或随机采样，
再用样条插值、低通恢复或迭代阈值法重建，统计 SNR 与耗时。
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .commands import BenchCommands, ToolCommands
from .commands.bench import add_config_arguments
from .core import (
    EXIT_DATA,
    EXIT_USAGE,
    ConfigError,
    Method,
    ResampleBenchError,
    UsageError,
)
from .core.constants import DEFAULT_FRAME_LEN, RESPONSE_POINTS, TOOL_NAME
from .services import RenderService
from .utils import logger, setup_logging


class _Parser(argparse.ArgumentParser):
    """用法错误抛出 UsageError，由 cli_main 统一映射为退出码 1"""

    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=TOOL_NAME, description="音频采样与恢复方案的 SNR / 耗时基准测试")
    parser.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    bench = sub.add_parser("bench", help="运行完整实验矩阵")
    add_config_arguments(bench)

    study = sub.add_parser("filter-study", help="比较 FIR 窗与 IIR 原型作为抗混叠滤波器的效果")
    add_config_arguments(study)

    corpus = sub.add_parser("make-corpus", help="生成合成低通测试 WAV")
    corpus.add_argument("--out", required=True, help="输出目录")
    corpus.add_argument("--files", type=int, default=2)
    corpus.add_argument("--seconds", type=float, default=0.5)
    corpus.add_argument("--sample-rate", type=int, default=44100)
    corpus.add_argument("--seed", type=int, default=0)

    demo = sub.add_parser("demo-sparse", help="稀疏信号上样条插值与 IMAT 的对比")
    demo.add_argument("--config", help="key=value 配置文件（读取 imat.* 与 spline.*）")
    demo.add_argument("--n", type=int, default=DEFAULT_FRAME_LEN)
    demo.add_argument("--k", type=int, default=64)
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--rate", type=float, default=0.5)
    demo.add_argument("--iterations", type=int, help="IMAT 迭代次数")
    demo.add_argument("--out", default="sparse_demo.csv", help="曲线 CSV 路径")

    filters = sub.add_parser("filters", help="输出滤波器幅频表")
    filters.add_argument("--config", help="key=value 配置文件（读取 filter.*）")
    filters.add_argument("--kind", choices=["fft", "fir", "iir"])
    filters.add_argument("--cutoff", type=float, default=0.25, help="归一化截止频率 (0, 0.5]")
    filters.add_argument("--taps", type=int)
    filters.add_argument("--window", choices=["rectangular", "hamming", "blackman", "kaiser"])
    filters.add_argument("--beta", type=float, help="Kaiser beta")
    filters.add_argument("--order", type=int)
    filters.add_argument("--design", choices=["butterworth", "chebyshev1"])
    filters.add_argument("--ripple", type=float, help="切比雪夫纹波 (dB)")
    filters.add_argument("--points", type=int, default=RESPONSE_POINTS)
    filters.add_argument("--out", help="CSV 路径，缺省写到标准输出")
    filters.add_argument("--menu", help="把全部对比滤波器的频响写到该目录")

    recover = sub.add_parser("recover", help="单文件、单方案的采样与恢复")
    recover.add_argument("--config", help="key=value 配置文件")
    recover.add_argument("--input", required=True, help="输入 WAV")
    recover.add_argument("--method", required=True, choices=[m.value for m in Method])
    recover.add_argument("--rate", type=float, required=True)
    recover.add_argument("--seed", type=int)
    recover.add_argument("--out", required=True, help="输出 WAV")
    return parser


class ResampleBench(BenchCommands, ToolCommands):
    """命令行程序

    通过混入类 (Mixin) 模式组合功能：
    - BenchCommands: bench、filter-study、make-corpus
    - ToolCommands: demo-sparse、filters、recover
    """

    def __init__(self, verbose: bool = False, render: Optional[RenderService] = None):
        self.verbose = verbose
        self.render = render or RenderService()

    def dispatch(self, args: argparse.Namespace) -> int:
        handlers = {
            "bench": self.cmd_bench,
            "filter-study": self.cmd_filter_study,
            "make-corpus": self.cmd_make_corpus,
            "demo-sparse": self.cmd_demo_sparse,
            "filters": self.cmd_filters,
            "recover": self.cmd_recover,
        }
        handler = handlers.get(args.command)
        if handler is None:
            raise UsageError("缺少子命令")
        return handler(args)


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行入口

    Returns:
        退出码：0 成功，1 用法/配置错误，2 数据错误
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"{TOOL_NAME}: 错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    setup_logging("DEBUG" if args.verbose else "INFO")
    app = ResampleBench(verbose=args.verbose)
    try:
        return app.dispatch(args)
    except (UsageError, ConfigError) as e:
        print(f"{TOOL_NAME}: 错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResampleBenchError as e:
        logger.error(f"[resample] {type(e).__name__}: {e}")
        return EXIT_DATA
    except OSError as e:
        logger.error(f"[resample] 文件操作失败: {e}")
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
