"""渲染服务 - 汇总表的纯文本与控制台输出"""

from __future__ import annotations

import math
import statistics
from collections import defaultdict
from typing import Iterable, Optional, Sequence

from ..core.constants import TIMING_FLATNESS_LIMIT, TOOL_NAME
from ..core.models import BenchRecord
from ..utils.helpers import format_rate
from ..utils.log import logger
from .metrics import mean_elapsed_by_method, normalized_times, timing_flatness


def _cell(value: Optional[float]) -> str:
    if value is None:
        return "-"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.2f}"


def _text_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    """等宽对齐的纯文本表格，首列左对齐、其余右对齐"""
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]

    def fmt(row: Sequence[str]) -> str:
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        return "  ".join(cells).rstrip()

    lines = [fmt(header), "-" * (sum(widths) + 2 * (len(widths) - 1))]
    lines.extend(fmt(row) for row in rows)
    return lines


class RenderService:
    """渲染服务 - 统一处理汇总表输出"""

    def __init__(self, console=None):
        """
        Args:
            console: rich Console；为 None 时在首次打印时创建
        """
        self._console = console

    # ==================== 数据整理 ====================

    @staticmethod
    def snr_grid(records: Iterable[BenchRecord]) -> tuple[list[float], list[tuple[str, list[Optional[float]]]]]:
        """按 (方法, 采样率) 求各文件平均 SNR

        Returns:
            (采样率列表, [(方法, 各采样率平均 SNR)])
        """
        grouped: dict[str, dict[float, list[float]]] = defaultdict(lambda: defaultdict(list))
        for record in records:
            grouped[record.method][record.rate].append(record.snr_db)
        rates = sorted({rate for by_rate in grouped.values() for rate in by_rate})
        rows = []
        for method in sorted(grouped):
            by_rate = grouped[method]
            rows.append(
                (method, [statistics.fmean(by_rate[r]) if r in by_rate else None for r in rates])
            )
        return rates, rows

    # ==================== 纯文本 ====================

    def summary_text(self, records: Sequence[BenchRecord], include_timing: bool = True) -> str:
        """确定性的纯文本汇总（写入 summary.txt）"""
        records = list(records)
        files = sorted({r.file for r in records})
        rates, rows = self.snr_grid(records)

        lines = [
            f"{TOOL_NAME} 汇总",
            f"文件数: {len(files)}  记录数: {len(records)}",
            "",
            "平均 SNR (dB)",
        ]
        lines.extend(
            _text_table(
                ["method"] + [format_rate(r) for r in rates],
                [[method] + [_cell(v) for v in values] for method, values in rows],
            )
        )

        if include_timing and records:
            means = mean_elapsed_by_method(records)
            normalized = normalized_times(records)
            flatness = timing_flatness(records)
            timing_rows = []
            for method in sorted(means):
                ratio = flatness.get(method, math.nan)
                flag = "  (!)" if ratio > TIMING_FLATNESS_LIMIT else ""
                timing_rows.append(
                    [
                        method,
                        f"{means[method]:.6f}",
                        f"{normalized[method]:.3f}" if method in normalized else "-",
                        f"{ratio:.2f}{flag}" if math.isfinite(ratio) else "inf  (!)",
                    ]
                )
            lines.extend(["", "CPU 时间"])
            lines.extend(_text_table(["method", "mean_s", "normalized", "max/min"], timing_rows))
            lines.append(f"max/min 为各采样率平均耗时之比，超过 {TIMING_FLATNESS_LIMIT:g} 倍标记 (!)，仅供观察")
        return "\n".join(lines) + "\n"

    # ==================== 控制台 ====================

    @property
    def console(self):
        if self._console is None:
            from rich.console import Console

            self._console = Console()
        return self._console

    def print_summary(self, records: Sequence[BenchRecord], include_timing: bool = True) -> None:
        """用 rich 表格打印汇总；失败时降级为纯文本"""
        try:
            from rich.table import Table

            rates, rows = self.snr_grid(records)
            table = Table(title="平均 SNR (dB)")
            table.add_column("method", style="bold")
            for rate in rates:
                table.add_column(format_rate(rate), justify="right")
            for method, values in rows:
                table.add_row(method, *[_cell(v) for v in values])
            self.console.print(table)

            if include_timing and records:
                normalized = normalized_times(records)
                flatness = timing_flatness(records)
                timing = Table(title="CPU 时间")
                timing.add_column("method", style="bold")
                timing.add_column("normalized", justify="right")
                timing.add_column("max/min", justify="right")
                for method in sorted(flatness):
                    ratio = flatness[method]
                    style = "red" if ratio > TIMING_FLATNESS_LIMIT else ""
                    timing.add_row(
                        method,
                        f"{normalized[method]:.3f}" if method in normalized else "-",
                        f"[{style}]{ratio:.2f}[/{style}]" if style else f"{ratio:.2f}",
                    )
                self.console.print(timing)
        except Exception as e:
            logger.warning(f"[resample] 控制台表格渲染失败: {e}")
            # 降级为纯文本
            print(self.summary_text(records, include_timing))

    def print_rows(self, title: str, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
        """打印任意表格（filter-study 等命令使用）"""
        try:
            from rich.table import Table

            table = Table(title=title)
            for i, name in enumerate(header):
                table.add_column(name, justify="left" if i == 0 else "right")
            for row in rows:
                table.add_row(*row)
            self.console.print(table)
        except Exception as e:
            logger.warning(f"[resample] 控制台表格渲染失败: {e}")
            print("\n".join([title] + _text_table(header, rows)))
