# __init__.py - uavsec 패키지

"""
uavsec - 인공 잡음(AN) 보조 UAV 보안 통신의 평균 비밀 전송률 최대화

궤적, Alice/Bob 송신 전력, AN 전력 분할을 블록 좌표 하강과 연속 볼록 근사로
번갈아 최적화하고, 비교 기법과 함께 CSV 실험 결과를 만든다.
"""

from .bcd_driver import SchemeKind, SolveReport, bcd_solve, complexity_estimate, initial_point
from .cli import cli_main, main
from .config import load_config
from .errors import ClosedFormUnavailable, ConfigError, ScenarioError, SolverError, UavsecError
from .experiments import ExperimentSpec, run_experiment
from .scenario import (
    PowerBudget,
    ScenarioConfig,
    SolverTolerances,
    Trajectory,
    baseline_trajectory,
    channel_gain,
    max_displacement,
    validate_trajectory,
)
from .secrecy_model import PowerAllocation, SlotLink, average_secrecy_rate, slot_secrecy_rate

__all__ = [
    "ClosedFormUnavailable",
    "ConfigError",
    "ExperimentSpec",
    "PowerAllocation",
    "PowerBudget",
    "ScenarioConfig",
    "ScenarioError",
    "SchemeKind",
    "SlotLink",
    "SolveReport",
    "SolverError",
    "SolverTolerances",
    "Trajectory",
    "UavsecError",
    "average_secrecy_rate",
    "baseline_trajectory",
    "bcd_solve",
    "channel_gain",
    "cli_main",
    "complexity_estimate",
    "initial_point",
    "load_config",
    "main",
    "max_displacement",
    "run_experiment",
    "slot_secrecy_rate",
    "validate_trajectory",
]
