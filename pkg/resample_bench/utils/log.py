"""日志工具

全局共享一个 logger，所有模块通过 ``from ..utils.log import logger`` 使用，
消息统一以 ``[resample]`` 开头。
"""

from __future__ import annotations

import logging

from ..core.constants import TOOL_NAME

logger = logging.getLogger(TOOL_NAME)
logger.addHandler(logging.NullHandler())


def setup_logging(level: str = "INFO") -> None:
    """安装控制台日志处理器（优先 rich，失败时退回标准 StreamHandler）"""
    for handler in list(logger.handlers):
        if not isinstance(handler, logging.NullHandler):
            logger.removeHandler(handler)

    numeric = logging.getLevelName(str(level).upper())
    if not isinstance(numeric, int):
        numeric = logging.INFO
    logger.setLevel(numeric)

    try:
        from rich.console import Console
        from rich.logging import RichHandler

        handler: logging.Handler = RichHandler(
            console=Console(stderr=True), show_path=False, markup=False
        )
        handler.setFormatter(logging.Formatter("%(message)s"))
    except Exception:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))

    logger.addHandler(handler)
    logger.propagate = False
