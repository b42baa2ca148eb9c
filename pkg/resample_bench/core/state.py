"""输出目录管理模块"""

from __future__ import annotations

import csv
import statistics
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence, Union

from ..utils.helpers import format_rate, safe_name
from ..utils.log import logger
from .constants import (
    CPU_TIME_FILE,
    FILTER_STUDY_FILE,
    PLOTS_DIR,
    RECOVERED_DIR,
    RESULTS_COLUMNS,
    RESULTS_FILE,
    SUMMARY_FILE,
)
from .models import BenchRecord, FilterStudyRow, format_snr


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    """写 CSV：UTF-8、LF 换行、首行为表头"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def results_header(include_timing: bool = True, include_pesq: bool = False) -> list[str]:
    """results.csv 表头；关闭计时时去掉 elapsed_seconds 列"""
    header = [c for c in RESULTS_COLUMNS if include_timing or c != "elapsed_seconds"]
    if include_pesq:
        header.append("pesq")
    return header


def read_results(path: Union[str, Path]) -> list[BenchRecord]:
    """读回 results.csv"""
    with open(path, "r", encoding="utf-8", newline="") as f:
        return [BenchRecord.from_dict(row) for row in csv.DictReader(f)]


class OutputStore:
    """基准测试输出目录

    目录结构:
    <output_dir>/
    ├── results.csv                      # file,method,rate,snr_db,elapsed_seconds,seed[,pesq]
    ├── summary.txt                      # 汇总表（纯文本）
    ├── filter_study.csv                 # 滤波器对比实验（仅 filter-study 命令）
    ├── plots/
    │   ├── U-AF-FFT-Sp.dat              # 两列: rate snr_db（各文件平均）
    │   ├── ...
    │   └── cpu_time.dat                 # method mean_elapsed_seconds normalized
    └── recovered/
        └── <file>.<method>.<rate>.wav   # 重建信号，16 位 PCM
    """

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.plots_dir = self.root / PLOTS_DIR
        self.recovered_dir = self.root / RECOVERED_DIR

    def ensure(self) -> "OutputStore":
        """创建目录"""
        self.plots_dir.mkdir(parents=True, exist_ok=True)
        self.recovered_dir.mkdir(parents=True, exist_ok=True)
        return self

    @property
    def results_path(self) -> Path:
        return self.root / RESULTS_FILE

    @property
    def summary_path(self) -> Path:
        return self.root / SUMMARY_FILE

    @property
    def filter_study_path(self) -> Path:
        return self.root / FILTER_STUDY_FILE

    def plot_path(self, method: str) -> Path:
        return self.plots_dir / f"{safe_name(method)}.dat"

    def recovered_path(self, file: str, method: str, rate: float) -> Path:
        """recovered/<文件名去扩展名>.<方法>.<采样率>.wav"""
        stem = Path(file).stem
        return self.recovered_dir / f"{safe_name(stem)}.{safe_name(method)}.{format_rate(rate)}.wav"

    # ==================== 写入 ====================

    def write_results(
        self,
        records: Iterable[BenchRecord],
        include_timing: bool = True,
        include_pesq: bool = False,
    ) -> Path:
        """按 (file, method, rate) 排序后写出，与调度顺序无关"""
        ordered = sorted(records, key=lambda r: r.sort_key)
        path = write_csv(
            self.results_path,
            results_header(include_timing, include_pesq),
            (r.to_row(include_timing, include_pesq) for r in ordered),
        )
        logger.info(f"[resample] 已写出 {len(ordered)} 条记录: {path}")
        return path

    def write_plot_data(self, records: Iterable[BenchRecord]) -> list[Path]:
        """每个方法一个 .dat 文件：采样率与各文件平均 SNR"""
        grouped: dict[str, dict[float, list[float]]] = defaultdict(lambda: defaultdict(list))
        for record in records:
            grouped[record.method][record.rate].append(record.snr_db)

        self.plots_dir.mkdir(parents=True, exist_ok=True)
        paths = []
        for method, by_rate in sorted(grouped.items()):
            lines = ["# rate snr_db"]
            for rate in sorted(by_rate):
                lines.append(f"{rate:.6f} {format_snr(statistics.fmean(by_rate[rate]))}")
            path = self.plot_path(method)
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            paths.append(path)
        return paths

    def write_cpu_time(self, means: dict[str, float], normalized: dict[str, float]) -> Path:
        """plots/cpu_time.dat：平均耗时与归一化耗时"""
        lines = ["# method mean_elapsed_seconds normalized"]
        for method in sorted(means):
            norm = normalized.get(method)
            norm_text = "" if norm is None else f"{norm:.6f}"
            lines.append(f"{method} {means[method]:.6f} {norm_text}".rstrip())
        self.plots_dir.mkdir(parents=True, exist_ok=True)
        path = self.plots_dir / CPU_TIME_FILE
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def write_summary(self, text: str) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        self.summary_path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        return self.summary_path

    def write_filter_study(self, rows: Iterable[FilterStudyRow]) -> Path:
        ordered = sorted(rows, key=lambda r: (r.file, r.filter_label, r.rate))
        path = write_csv(
            self.filter_study_path,
            ["file", "filter", "rate", "snr_db"],
            (r.to_row() for r in ordered),
        )
        logger.info(f"[resample] 已写出滤波器对比结果 {len(ordered)} 行: {path}")
        return path

