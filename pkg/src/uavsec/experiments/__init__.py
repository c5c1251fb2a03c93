# experiments/__init__.py - 실험 실행과 결과 기록

from .runner import ExperimentResult, JobOutcome, SolveJob, export_baseline, run_experiment
from .spec import ExperimentSpec

__all__ = [
    "ExperimentResult",
    "ExperimentSpec",
    "JobOutcome",
    "SolveJob",
    "export_baseline",
    "run_experiment",
]
