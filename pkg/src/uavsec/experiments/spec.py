# experiments/spec.py - 실험 명세

from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

from ..bcd_driver import SchemeKind
from ..constants import DEFAULT_WORKERS, EXPERIMENT_KINDS
from ..errors import ConfigError


@dataclass(frozen=True)
class ExperimentSpec:
    """실험 종류, 기법 목록, 스윕 값(T 초 또는 P_ave dBm), 전력 분할 λ 목록, 출력 위치"""

    kind: str
    schemes: Tuple[SchemeKind, ...]
    sweep_values: Tuple[float, ...]
    splits: Tuple[float, ...]
    output_dir: Path
    workers: int = DEFAULT_WORKERS

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind '{self.kind}' (valid: {', '.join(sorted(EXPERIMENT_KINDS))})")
        if not self.schemes:
            raise ConfigError("experiment.schemes must not be empty")
        for name in ("sweep_values", "splits"):
            values = getattr(self, name)
            if list(values) != sorted(values):
                raise ConfigError(f"experiment.{name} must be sorted ascending, got {list(values)}")
        if self.kind == "sweep_power" and not self.splits:
            raise ConfigError("experiment.splits must not be empty for sweep_power")
        if self.kind != "solve" and not self.sweep_values:
            raise ConfigError(f"experiment.sweep_values must not be empty for {self.kind}")
        if self.workers < 1:
            raise ConfigError(f"experiment.workers must be at least 1, got {self.workers}")
        object.__setattr__(self, "output_dir", Path(self.output_dir))
