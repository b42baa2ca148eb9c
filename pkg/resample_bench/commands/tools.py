"""单项工具命令模块 - 稀疏演示、滤波器频响、单文件恢复"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path
from typing import TYPE_CHECKING

from ..core.constants import EXIT_OK, NYQUIST
from ..core.errors import UsageError
from ..core.models import AudioSignal, FilterKind, FilterSpec, FirWindow, IirDesign
from ..core.state import write_csv
from ..services.bench import recover_signal, run_sparse_demo, study_filters
from ..services.config import ConfigService
from ..services.filters import default_filter_spec, design, response_table
from ..services.wav_io import load_wav, save_wav
from ..utils.log import logger

if TYPE_CHECKING:
    from ..main import ResampleBench

RESPONSE_HEADER = ["frequency", "magnitude_db"]


def _response_rows(spec: FilterSpec, points: int) -> list[list[str]]:
    return [[f"{f:.6f}", f"{db:.6f}"] for f, db in response_table(design(spec), points)]


class ToolCommands:
    """单项工具命令混入类

    包含 demo-sparse、filters、recover 三个子命令。
    """

    def _config_service(self: "ResampleBench", args: argparse.Namespace) -> ConfigService:
        return ConfigService.from_file(args.config) if getattr(args, "config", None) else ConfigService()

    # ==================== demo-sparse ====================

    def cmd_demo_sparse(self: "ResampleBench", args: argparse.Namespace) -> int:
        """稀疏信号上样条插值的失效演示，输出 original/sampled/spline/imat 四条曲线"""
        service = self._config_service(args)
        params = service.imat_params
        if args.iterations is not None:
            params = replace(params, iterations=args.iterations)
        demo = run_sparse_demo(
            n=args.n,
            k=args.k,
            seed=args.seed,
            rate=args.rate,
            imat_params=params,
            boundary=service.spline_boundary,
        )
        path = demo.write_csv(args.out)
        self.render.print_rows(
            f"稀疏信号 n={args.n}, k={args.k}, r={args.rate:g}",
            ["recovery", "snr_db"],
            [["spline", f"{demo.spline_snr_db:.2f}"], ["imat", f"{demo.imat_snr_db:.2f}"]],
        )
        logger.info(f"[resample] 曲线已写出: {path}")
        return EXIT_OK

    # ==================== filters ====================

    def _filter_spec_from_args(self: "ResampleBench", args: argparse.Namespace) -> FilterSpec:
        overrides = self._config_service(args).filter_spec_overrides
        spec = default_filter_spec(FilterKind(args.kind), 2.0 * args.cutoff, overrides)
        changes = {}
        if args.taps is not None:
            changes["fir_taps"] = args.taps
        if args.window is not None:
            changes["fir_window"] = FirWindow(args.window)
        if args.beta is not None:
            changes["kaiser_beta"] = args.beta
        if args.order is not None:
            changes["iir_order"] = args.order
        if args.design is not None:
            changes["iir_design"] = IirDesign(args.design)
        if args.ripple is not None:
            changes["ripple_db"] = args.ripple
        return replace(spec, **changes).validate()

    def cmd_filters(self: "ResampleBench", args: argparse.Namespace) -> int:
        """输出滤波器幅频表

        指定 --menu 时把对比实验用到的全部滤波器各写一个 <label>.csv；
        否则输出 --kind 指定的单个滤波器，写到 --out 或标准输出。
        """
        if not (0.0 < args.cutoff <= NYQUIST):
            raise UsageError(f"--cutoff 必须在 (0, 0.5] 内: {args.cutoff}")

        if args.menu:
            overrides = self._config_service(args).filter_spec_overrides
            out_dir = Path(args.menu)
            for spec in study_filters(2.0 * args.cutoff, overrides):
                path = write_csv(out_dir / f"{spec.label}.csv", RESPONSE_HEADER, _response_rows(spec, args.points))
                logger.info(f"[resample] 已写出 {spec.label}: {path}")
            return EXIT_OK

        if args.kind is None:
            raise UsageError("需要 --kind 或 --menu")
        spec = self._filter_spec_from_args(args)
        rows = _response_rows(spec, args.points)
        if args.out:
            write_csv(args.out, RESPONSE_HEADER, rows)
            logger.info(f"[resample] 已写出 {spec.label}: {args.out}")
        else:
            writer = csv.writer(sys.stdout, lineterminator="\n")
            writer.writerow(RESPONSE_HEADER)
            writer.writerows(rows)
        return EXIT_OK

    # ==================== recover ====================

    def cmd_recover(self: "ResampleBench", args: argparse.Namespace) -> int:
        """单文件、单方案的采样与恢复"""
        service = self._config_service(args)
        service.set("dataset_dir", str(Path(args.input).parent))
        service.set("methods", args.method)
        service.set("rates", str(args.rate))
        service.set("seed", args.seed)
        config = service.to_bench_config()

        signal = load_wav(args.input)
        samples, snr, elapsed = recover_signal(signal, config.methods[0], args.rate, config)
        save_wav(args.out, AudioSignal(samples, signal.sample_rate_hz))
        self.render.print_rows(
            Path(args.input).name,
            ["method", "rate", "snr_db", "elapsed_s"],
            [[config.methods[0].value, f"{args.rate:g}", f"{snr:.2f}", f"{elapsed:.4f}"]],
        )
        logger.info(f"[resample] 重建信号已写出: {args.out}")
        return EXIT_OK

