"""工具模块"""

from .helpers import (
    is_power_of_two,
    parse_csv_list,
    parse_rates,
    format_rate,
    safe_name,
    fill_template,
    list_wav_files,
)
from .log import logger, setup_logging

__all__ = [
    "is_power_of_two",
    "parse_csv_list",
    "parse_rates",
    "format_rate",
    "safe_name",
    "fill_template",
    "list_wav_files",
    "logger",
    "setup_logging",
]
