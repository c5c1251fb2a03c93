# commands/base.py - 실험 명령어 공통 옵션, 설정 해석, 오류 → 종료 코드 변환

import logging
import sys
from typing import Any, Dict, Optional

from cleo.commands.command import Command
from cleo.helpers import option
from cleo.io.outputs.output import Verbosity

from ..config import resolve_config
from ..constants import EXIT_CONFIG_ERROR, EXIT_SOLVER_ERROR
from ..errors import ConfigError, ScenarioError, SolverError
from ..experiments import ExperimentResult, ExperimentSpec, run_experiment
from ..scenario import ScenarioConfig

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

LOG_HANDLER = logging.StreamHandler(sys.stderr)
LOG_HANDLER.setFormatter(logging.Formatter(LOG_FORMAT))


def configure_logging(level: int) -> None:
    """uavsec 로거에 stderr 핸들러를 한 번만 붙이고 레벨 설정"""
    logger = logging.getLogger("uavsec")
    if LOG_HANDLER not in logger.handlers:
        logger.addHandler(LOG_HANDLER)
    logger.setLevel(level)


class ExperimentCommand(Command):
    """설정을 읽고 실험 하나를 실행하는 명령어의 기반 클래스"""

    # 하위 클래스가 지정하는 ExperimentSpec.kind
    kind: Optional[str] = None

    options = [
        option("config", "c", "Path to the YAML config document", flag=False),
        option("out", "o", "Output directory for CSV files", flag=False),
        option("scheme", "s", "Scheme to run (repeatable)", flag=False, multiple=True),
        option("seed", None, "Reserved seed (the solve path is deterministic)", flag=False),
    ]

    def handle(self) -> int:
        configure_logging(self._log_level())

        try:
            self._check_seed()
            cfg, spec, source = resolve_config(self.option("config"), self._overrides())
            if source:
                self.line(f"Using config: {source}", verbosity=Verbosity.VERBOSE)
            result = self.run_kind(cfg, spec)
        except (ConfigError, ScenarioError) as e:
            self.line_error(f"<error>Configuration error: {e}</error>")
            return EXIT_CONFIG_ERROR
        except SolverError as e:
            self.line_error(f"<error>Solver error: {e}</error>")
            return EXIT_SOLVER_ERROR

        self._report(result)
        return 0

    def run_kind(self, cfg: ScenarioConfig, spec: ExperimentSpec) -> ExperimentResult:
        """설정된 종류의 실험 실행 (기본: run_experiment)"""
        return run_experiment(spec, cfg)

    def _overrides(self) -> Dict[str, Any]:
        """명령행 플래그 → 설정 레이어"""
        experiment: Dict[str, Any] = {}
        if self.kind:
            experiment["kind"] = self.kind
        if self.option("out"):
            experiment["output_dir"] = self.option("out")
        schemes = self.option("scheme")
        if schemes:
            experiment["schemes"] = list(schemes)
        return {"experiment": experiment}

    def _check_seed(self) -> None:
        seed = self.option("seed")
        if seed is None:
            return
        try:
            int(seed)
        except ValueError:
            raise ConfigError(f"--seed must be an integer, got '{seed}'") from None

    def _log_level(self) -> int:
        if self.io.is_debug() or self.io.is_very_verbose():
            return logging.DEBUG
        if self.io.is_verbose():
            return logging.INFO
        return logging.WARNING

    def _report(self, result: ExperimentResult) -> None:
        """사람이 읽는 요약 (데이터는 파일에만)"""
        for outcome in result.outcomes:
            job, report = outcome.job, outcome.report
            label = f"{job.scheme.value} T={job.horizon:g}s"
            if job.p_ave_dbm is not None:
                label += f" P_ave={job.p_ave_dbm:g}dBm lambda={job.split:g}"
            if report is None:
                self.line(f"<comment>{label}: failed ({outcome.error})</comment>")
            else:
                self.line(
                    f"{label}: ASR={report.final_asr:.6f} bps/Hz after {report.iterations} iterations "
                    f"({report.termination})"
                )
        for path in result.files:
            self.info(f"Wrote {path}")
