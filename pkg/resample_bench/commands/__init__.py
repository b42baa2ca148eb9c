"""命令模块"""

from .bench import BenchCommands
from .tools import ToolCommands

__all__ = ["BenchCommands", "ToolCommands"]
