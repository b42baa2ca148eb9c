"""配置服务 - 统一配置管理

配置文件是扁平的 key=value 文本，键可以带点（如 imat.alpha=0.05），# 开头为注释。
所有键、类型和默认值都声明在 _conf_schema.json 中。
取值优先级：命令行覆盖 > 配置文件 > 环境变量（仅 threads） > schema 默认值。
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Optional, Union

from ..core.constants import ENV_THREADS
from ..core.errors import ConfigError
from ..core.models import (
    BenchConfig,
    FirWindow,
    IirDesign,
    ImatParams,
    Method,
    SplineBoundary,
    Transform,
)
from ..utils.helpers import parse_csv_list, parse_rates
from ..utils.log import logger

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "_conf_schema.json"


def load_schema(path: Path = SCHEMA_PATH) -> dict:
    """读取配置 schema"""
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def parse_config_text(text: str) -> dict[str, str]:
    """解析 key=value 文本

    Raises:
        ConfigError: 某一行没有等号
    """
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"配置第 {lineno} 行缺少 '=': {stripped!r}")
        key, value = stripped.split("=", 1)
        values[key.strip()] = value.strip()
    return values


class ConfigService:
    """统一配置管理服务"""

    def __init__(self, values: Optional[dict] = None, schema: Optional[dict] = None):
        self.schema = schema if schema is not None else load_schema()
        self._values: dict[str, Any] = {}
        for key, value in (values or {}).items():
            self.set(key, value)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "ConfigService":
        """从配置文件加载

        Raises:
            ConfigError: 文件不存在或无法读取
        """
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"配置文件不存在: {path}")
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"无法读取配置文件 {path}: {e}") from e
        service = cls(parse_config_text(text))
        logger.info(f"[resample] 已加载配置: {path} ({len(service._values)} 项)")
        return service

    def set(self, key: str, value: Any) -> None:
        """设置配置项（None 表示不覆盖）；未知键记录警告后忽略"""
        if value is None:
            return
        if key not in self.schema:
            logger.warning(f"[resample] 未知配置项 {key}，已忽略")
            return
        self._values[key] = value

    def _default(self, key: str) -> Any:
        return self.schema.get(key, {}).get("default")

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置项"""
        if key in self._values:
            return self._values[key]
        if key == "threads" and os.environ.get(ENV_THREADS):
            return os.environ[ENV_THREADS]
        fallback = self._default(key)
        return fallback if fallback is not None else default

    def get_int(self, key: str, default: int = 0) -> int:
        """获取整数配置，非法时回退 schema 默认值"""
        val = self.get(key, default)
        try:
            return int(val) if val is not None else default
        except (ValueError, TypeError):
            fallback = self._default(key)
            logger.warning(f"[resample] 配置 {key}={val!r} 非法，使用默认值 {fallback}")
            return int(fallback) if fallback is not None else default

    def get_float(self, key: str, default: float = 0.0) -> float:
        """获取浮点配置，非法时回退 schema 默认值"""
        val = self.get(key, default)
        try:
            return float(val) if val is not None else default
        except (ValueError, TypeError):
            fallback = self._default(key)
            logger.warning(f"[resample] 配置 {key}={val!r} 非法，使用默认值 {fallback}")
            return float(fallback) if fallback is not None else default

    def get_bool(self, key: str, default: bool = False) -> bool:
        """获取布尔配置"""
        val = self.get(key, default)
        if isinstance(val, bool):
            return val
        if isinstance(val, str):
            return val.lower() in ("true", "1", "yes", "on")
        return bool(val)

    def get_str(self, key: str, default: str = "") -> str:
        """获取字符串配置；声明了 options 的键取值不在选项内时回退默认值"""
        val = self.get(key, default)
        text = str(val).strip() if val else default
        options = self.schema.get(key, {}).get("options")
        if options and text and text not in options:
            fallback = self._default(key)
            logger.warning(f"[resample] 配置 {key}={text!r} 不在可选值 {options} 中，使用默认值 {fallback}")
            return str(fallback)
        return text

    def get_list(self, key: str) -> list[str]:
        """获取逗号分隔列表"""
        val = self.get(key, "")
        if isinstance(val, (list, tuple)):
            return [str(v).strip() for v in val if str(v).strip()]
        return parse_csv_list(val)

    # ==================== 业务配置快捷方法 ====================

    @property
    def dataset_dir(self) -> str:
        return self.get_str("dataset_dir", "")

    @property
    def output_dir(self) -> str:
        return self.get_str("output_dir", "bench_out")

    @property
    def rates(self) -> list[float]:
        val = self.get("rates", "")
        if isinstance(val, (list, tuple)):
            return [float(v) for v in val]
        return parse_rates(val)

    @property
    def methods(self) -> list[Method]:
        """方案列表；未知方案直接报错"""
        methods = []
        for name in self.get_list("methods"):
            try:
                methods.append(Method(name))
            except ValueError as e:
                raise ConfigError(f"未知方案: {name}") from e
        return methods

    @property
    def frame_len(self) -> int:
        return self.get_int("frame_len", 1024)

    @property
    def seed(self) -> int:
        return self.get_int("seed", 0)

    @property
    def threads(self) -> int:
        return max(1, self.get_int("threads", 1))

    @property
    def timing_repeats(self) -> int:
        return max(1, self.get_int("timing.repeats", 1))

    @property
    def timing_include_filter(self) -> bool:
        return self.get_bool("timing.include_filter", False)

    @property
    def log_level(self) -> str:
        return self.get_str("log_level", "INFO")

    @property
    def filter_spec_overrides(self) -> dict:
        """FilterSpec 字段覆盖（cutoff 由采样率决定，不在此处）"""
        return {
            "fir_window": FirWindow(self.get_str("filter.fir_window", "hamming")),
            "fir_taps": self.get_int("filter.fir_taps", 63),
            "kaiser_beta": self.get_float("filter.kaiser_beta", 8.6),
            "iir_design": IirDesign(self.get_str("filter.iir_design", "butterworth")),
            "iir_order": self.get_int("filter.iir_order", 6),
            "ripple_db": self.get_float("filter.ripple_db", 1.0),
        }

    @property
    def imat_params(self) -> ImatParams:
        beta = self.get_float("imat.beta", 0.0)
        return ImatParams(
            lam=self.get_float("imat.lambda", 1.0),
            beta=beta if beta > 0 else None,
            alpha=self.get_float("imat.alpha", 0.05),
            iterations=self.get_int("imat.iterations", 300),
            transform=Transform(self.get_str("imat.transform", "dft")),
        )

    @property
    def spline_boundary(self) -> SplineBoundary:
        return SplineBoundary(self.get_str("spline.boundary", "not-a-knot"))

    @property
    def pesq_command(self) -> Optional[str]:
        return self.get_str("pesq_command", "") or None

    def to_bench_config(self, no_timing: bool = False) -> BenchConfig:
        """校验并生成不可变的 BenchConfig

        Raises:
            ConfigError: 缺少数据集目录或取值违反不变量
        """
        if not self.dataset_dir:
            raise ConfigError("未指定数据集目录 (dataset_dir / --dataset)")
        return BenchConfig(
            dataset_dir=Path(self.dataset_dir),
            output_dir=Path(self.output_dir),
            rates=tuple(self.rates),
            methods=tuple(self.methods),
            frame_len=self.frame_len,
            seed=self.seed,
            threads=self.threads,
            timing_repeats=self.timing_repeats,
            timing_include_filter=self.timing_include_filter,
            no_timing=no_timing,
            filter_overrides=self.filter_spec_overrides,
            imat=self.imat_params,
            spline_boundary=self.spline_boundary,
            pesq_command=self.pesq_command,
        )
