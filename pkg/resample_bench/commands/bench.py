"""基准测试命令模块"""

from __future__ import annotations

import argparse
import math
import statistics
from typing import TYPE_CHECKING

from ..core.constants import EXIT_OK
from ..core.models import FilterStudyRow
from ..services.bench import make_corpus, run_bench, run_filter_study
from ..services.config import ConfigService
from ..utils.helpers import format_rate
from ..utils.log import logger, setup_logging

if TYPE_CHECKING:
    from ..main import ResampleBench


def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    """bench / filter-study 共用的配置参数（命令行优先于配置文件）"""
    parser.add_argument("--config", help="key=value 配置文件")
    parser.add_argument("--dataset", help="数据集目录")
    parser.add_argument("--out", help="输出目录")
    parser.add_argument("--rates", help="采样率列表，如 0.1,0.5 或 0.1..0.9")
    parser.add_argument("--methods", help="方案列表，如 U-AF-FFT-Sp,R-Sp")
    parser.add_argument("--seed", type=int, help="随机种子")
    parser.add_argument("--threads", type=int, help="并行线程数")
    parser.add_argument("--repeats", type=int, help="计时重复次数（取中位数）")
    parser.add_argument("--no-timing", action="store_true", help="结果中不写耗时列（用于逐字节比对）")


class BenchCommands:
    """基准测试命令混入类

    包含 bench、filter-study、make-corpus 三个子命令。
    设计为混入类，与主程序类一起使用。
    """

    def _load_config(self: "ResampleBench", args: argparse.Namespace) -> ConfigService:
        """配置文件 + 命令行覆盖"""
        service = ConfigService.from_file(args.config) if args.config else ConfigService()
        service.set("dataset_dir", args.dataset)
        service.set("output_dir", args.out)
        service.set("rates", args.rates)
        service.set("methods", args.methods)
        service.set("seed", args.seed)
        service.set("threads", args.threads)
        service.set("timing.repeats", args.repeats)
        if not self.verbose:
            setup_logging(service.log_level)
        return service

    # ==================== bench ====================

    def cmd_bench(self: "ResampleBench", args: argparse.Namespace) -> int:
        """运行完整实验矩阵"""
        config = self._load_config(args).to_bench_config(no_timing=args.no_timing)
        records = run_bench(config, self.render)
        self.render.print_summary(records, include_timing=not config.no_timing)
        logger.info(f"[resample] 完成，结果目录: {config.output_dir}")
        return EXIT_OK

    # ==================== filter-study ====================

    def cmd_filter_study(self: "ResampleBench", args: argparse.Namespace) -> int:
        """比较不同抗混叠滤波器（均匀采样 + 样条恢复）"""
        config = self._load_config(args).to_bench_config(no_timing=True)
        rows = run_filter_study(config)
        self.render.print_rows("滤波器对比 SNR (dB)", *self._study_table(rows))
        return EXIT_OK

    @staticmethod
    def _study_table(rows: list[FilterStudyRow]) -> tuple[list[str], list[list[str]]]:
        """按 (滤波器, 采样率) 对各文件求平均，透视成表格"""
        rates = sorted({r.rate for r in rows})
        grouped: dict[str, dict[float, list[float]]] = {}
        for row in rows:
            grouped.setdefault(row.filter_label, {}).setdefault(row.rate, []).append(row.snr_db)
        table = []
        for label in sorted(grouped):
            cells = [label]
            for rate in rates:
                values = grouped[label].get(rate)
                if not values:
                    cells.append("-")
                    continue
                mean = statistics.fmean(values)
                cells.append("inf" if math.isinf(mean) else f"{mean:.2f}")
            table.append(cells)
        return ["filter"] + [format_rate(r) for r in rates], table

    # ==================== make-corpus ====================

    def cmd_make_corpus(self: "ResampleBench", args: argparse.Namespace) -> int:
        """生成合成低通测试数据集"""
        paths = make_corpus(
            args.out,
            files=args.files,
            seconds=args.seconds,
            sample_rate=args.sample_rate,
            seed=args.seed,
        )
        for path in paths:
            print(path)
        return EXIT_OK
