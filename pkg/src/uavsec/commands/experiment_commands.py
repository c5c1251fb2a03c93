# commands/experiment_commands.py - solve, trace, sweep-t, sweep-p, trajectory, baseline 명령어

from ..experiments import ExperimentResult, ExperimentSpec, export_baseline
from ..scenario import ScenarioConfig
from .base import ExperimentCommand


class SolveCommand(ExperimentCommand):
    name = "solve"
    description = "Solve one scenario for each selected scheme"
    kind = "solve"


class TraceCommand(ExperimentCommand):
    name = "trace"
    description = "Record the per-iteration ASR trace for each mission time"
    kind = "trace"


class SweepTimeCommand(ExperimentCommand):
    name = "sweep-t"
    description = "Sweep the mission time T and record the final ASR"
    kind = "sweep_time"


class SweepPowerCommand(ExperimentCommand):
    name = "sweep-p"
    description = "Sweep the average power budget for each power split"
    kind = "sweep_power"


class TrajectoryCommand(ExperimentCommand):
    name = "trajectory"
    description = "Export optimized trajectories (and the baseline) for each mission time"
    kind = "trajectory_export"


class BaselineCommand(ExperimentCommand):
    name = "baseline"
    description = "Export the best-effort baseline trajectory without optimization"

    def run_kind(self, cfg: ScenarioConfig, spec: ExperimentSpec) -> ExperimentResult:
        path = export_baseline(cfg, spec.output_dir)
        return ExperimentResult(files=(path,), outcomes=())
