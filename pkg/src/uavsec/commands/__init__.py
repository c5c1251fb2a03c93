# commands/__init__.py - 명령어들 모음

from .config_command import ConfigCommand
from .experiment_commands import (
    BaselineCommand,
    SolveCommand,
    SweepPowerCommand,
    SweepTimeCommand,
    TraceCommand,
    TrajectoryCommand,
)

__all__ = [
    "BaselineCommand",
    "ConfigCommand",
    "SolveCommand",
    "SweepPowerCommand",
    "SweepTimeCommand",
    "TraceCommand",
    "TrajectoryCommand",
]
