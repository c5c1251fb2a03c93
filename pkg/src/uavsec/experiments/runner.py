# experiments/runner.py - 실험 실행: 풀이 작업 생성, 워커 풀 분배, 결과 기록

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from ..bcd_driver import SchemeKind, SolveReport, bcd_solve, complexity_estimate
from ..constants import (
    BASELINE_LABEL,
    SOLVE_CSV,
    SOLVE_HEADER,
    SUMMARY_FILENAME,
    SWEEP_POWER_CSV,
    SWEEP_POWER_HEADER,
    SWEEP_TIME_CSV,
    SWEEP_TIME_HEADER,
    TRACE_CSV,
    TRACE_HEADER,
    TRAJECTORY_CSV,
    TRAJECTORY_HEADER,
)
from ..errors import ConfigError, UavsecError
from ..scenario import ScenarioConfig, Trajectory, baseline_trajectory, dbm_to_watts
from .results import write_csv, write_summary
from .spec import ExperimentSpec

logger = logging.getLogger(__name__)

# 스윕 한 점의 실패로 기록하고 넘어가는 예외들
POINT_ERRORS = (UavsecError, ArithmeticError, ValueError)

# 전력 스윕 단조성 검사 허용오차 (bps/Hz)
MONOTONIC_SLACK = 1e-6


@dataclass(frozen=True)
class SolveJob:
    """스윕 한 점: 기본 시나리오 + 바꿀 값"""

    scheme: SchemeKind
    cfg: ScenarioConfig
    horizon_s: Optional[float] = None
    p_ave_dbm: Optional[float] = None
    split: Optional[float] = None

    def scenario(self) -> ScenarioConfig:
        cfg = self.cfg
        if self.horizon_s is not None:
            cfg = replace(cfg, horizon_s=self.horizon_s)
        if self.p_ave_dbm is not None or self.split is not None:
            budgets = cfg.budgets
            if self.p_ave_dbm is not None:
                budgets = replace(budgets, p_ave_w=dbm_to_watts(self.p_ave_dbm))
            if self.split is not None:
                budgets = replace(budgets, split=self.split)
            cfg = replace(cfg, budgets=budgets)
        return cfg

    @property
    def horizon(self) -> float:
        return self.horizon_s if self.horizon_s is not None else self.cfg.horizon_s


@dataclass(frozen=True)
class JobOutcome:
    job: SolveJob
    report: Optional[SolveReport]
    error: str = ""


@dataclass(frozen=True)
class ExperimentResult:
    files: Tuple[Path, ...]
    outcomes: Tuple[JobOutcome, ...]


def run_job(job: SolveJob, strict: bool = False) -> JobOutcome:
    """작업 하나 실행. strict가 아니면 실패를 메시지로 기록"""
    try:
        return JobOutcome(job=job, report=bcd_solve(job.scenario(), job.scheme))
    except POINT_ERRORS as e:
        if strict:
            raise
        logger.warning("%s at T=%s failed: %s", job.scheme.value, job.horizon, e)
        return JobOutcome(job=job, report=None, error=str(e) or type(e).__name__)


def execute_jobs(jobs: List[SolveJob], workers: int, strict: bool = False) -> List[JobOutcome]:
    """작업 목록 실행 (결과 순서는 제출 순서)"""
    if workers <= 1 or len(jobs) <= 1:
        return [run_job(job, strict) for job in jobs]

    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as executor:
        return list(executor.map(partial(run_job, strict=strict), jobs))


def prepare_output_dir(output_dir: Path) -> Path:
    """출력 디렉토리 생성 및 쓰기 가능 여부 확인"""
    path = Path(output_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"output directory not writable: {path} ({e})") from e
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory not writable: {path}")
    return path


def _summary_entry(outcome: JobOutcome) -> Dict:
    job, report = outcome.job, outcome.report
    entry = {
        "scheme": job.scheme.value,
        "T_s": float(job.horizon),
        "lambda": float(job.split) if job.split is not None else float(job.cfg.budgets.split),
        "P_ave_dBm": float(job.p_ave_dbm) if job.p_ave_dbm is not None else None,
        "iterations": None,
        "converged": None,
        "termination": None,
        "wall_time_s": None,
        "asr_bpshz": None,
        "null_steps": None,
        "error": outcome.error,
    }
    if report is not None:
        entry.update(
            iterations=report.iterations,
            converged=report.converged,
            termination=report.termination,
            wall_time_s=round(report.wall_time_s, 6),
            asr_bpshz=float(report.final_asr),
            null_steps=report.null_steps,
        )
    return entry


def _trajectory_rows(label: str, horizon: float, traj: Trajectory) -> Iterator[Dict]:
    for slot, (x, y) in enumerate(traj.waypoints, start=1):
        yield {"scheme": label, "T_s": horizon, "slot": slot, "x_m": float(x), "y_m": float(y), "error": ""}


def _solve_rows(outcomes: List[JobOutcome]) -> Iterator[Dict]:
    for outcome in outcomes:
        report = outcome.report
        yield {
            "scheme": outcome.job.scheme.value,
            "T_s": outcome.job.horizon,
            "iterations": report.iterations if report else None,
            "converged": report.converged if report else None,
            "asr_bpshz": report.final_asr if report else None,
            "error": outcome.error,
        }


def _trace_rows(outcomes: List[JobOutcome]) -> Iterator[Dict]:
    for outcome in outcomes:
        base = {"scheme": outcome.job.scheme.value, "T_s": outcome.job.horizon}
        if outcome.report is None:
            yield {**base, "error": outcome.error}
            continue
        for iteration, asr in enumerate(outcome.report.asr_trace):
            yield {**base, "iteration": iteration, "asr_bpshz": asr, "error": ""}


def _sweep_time_rows(outcomes: List[JobOutcome]) -> Iterator[Dict]:
    for outcome in outcomes:
        yield {
            "scheme": outcome.job.scheme.value,
            "T_s": outcome.job.horizon,
            "asr_bpshz": outcome.report.final_asr if outcome.report else None,
            "error": outcome.error,
        }


def _sweep_power_rows(outcomes: List[JobOutcome]) -> Iterator[Dict]:
    for outcome in outcomes:
        yield {
            "scheme": outcome.job.scheme.value,
            "lambda": outcome.job.split,
            "P_ave_dBm": outcome.job.p_ave_dbm,
            "asr_bpshz": outcome.report.final_asr if outcome.report else None,
            "error": outcome.error,
        }


def check_power_monotonicity(outcomes: List[JobOutcome]) -> List[str]:
    """(기법, λ)마다 P_ave가 커질 때 ASR이 줄지 않는지 검사"""
    series: Dict[Tuple[str, float], List[Tuple[float, float]]] = {}
    for outcome in outcomes:
        if outcome.report is None:
            continue
        key = (outcome.job.scheme.value, outcome.job.split)
        series.setdefault(key, []).append((outcome.job.p_ave_dbm, outcome.report.final_asr))

    problems = []
    for (scheme, split), points in series.items():
        points.sort()
        for (p_low, asr_low), (p_high, asr_high) in zip(points, points[1:]):
            if asr_high < asr_low - MONOTONIC_SLACK:
                message = (
                    f"{scheme} lambda={split:g}: ASR drops from {asr_low:.6f} at {p_low:g} dBm "
                    f"to {asr_high:.6f} at {p_high:g} dBm"
                )
                logger.warning("Power sweep not monotonic: %s", message)
                problems.append(message)
    return problems


def _build_jobs(spec: ExperimentSpec, cfg: ScenarioConfig) -> List[SolveJob]:
    if spec.kind == "solve":
        return [SolveJob(scheme, cfg) for scheme in spec.schemes]
    if spec.kind == "sweep_power":
        return [
            SolveJob(scheme, cfg, p_ave_dbm=p_ave, split=split)
            for scheme in spec.schemes
            for split in spec.splits
            for p_ave in spec.sweep_values
        ]
    return [SolveJob(scheme, cfg, horizon_s=horizon) for scheme in spec.schemes for horizon in spec.sweep_values]


def export_baseline(cfg: ScenarioConfig, output_dir: Path, horizons: Tuple[float, ...] = ()) -> Path:
    """최적화 없이 기준 궤적만 trajectory CSV로 기록"""
    output_dir = prepare_output_dir(output_dir)
    rows = list(_baseline_rows(cfg, horizons or (cfg.horizon_s,)))
    return write_csv(output_dir / TRAJECTORY_CSV, TRAJECTORY_HEADER, rows)


def _baseline_rows(cfg: ScenarioConfig, horizons: Tuple[float, ...]) -> Iterator[Dict]:
    for horizon in horizons:
        try:
            traj = baseline_trajectory(replace(cfg, horizon_s=horizon))
        except POINT_ERRORS as e:
            yield {"scheme": BASELINE_LABEL, "T_s": horizon, "error": str(e)}
            continue
        yield from _trajectory_rows(BASELINE_LABEL, horizon, traj)


def run_experiment(spec: ExperimentSpec, cfg: ScenarioConfig) -> ExperimentResult:
    """
    실험 실행 후 CSV와 summary.yaml 기록

    solve 종류는 실패를 그대로 올리고, 스윕 종류는 점별 실패를 error 칸에 남긴다.
    """
    output_dir = prepare_output_dir(spec.output_dir)
    strict = spec.kind == "solve"
    jobs = _build_jobs(spec, cfg)
    logger.info("Running %s: %d solves on %d worker(s)", spec.kind, len(jobs), spec.workers)
    outcomes = execute_jobs(jobs, spec.workers, strict=strict)

    extra = {"kind": spec.kind}
    if spec.kind == "solve":
        files = [write_csv(output_dir / SOLVE_CSV, SOLVE_HEADER, _solve_rows(outcomes))]
    elif spec.kind == "trace":
        files = [write_csv(output_dir / TRACE_CSV, TRACE_HEADER, _trace_rows(outcomes))]
    elif spec.kind == "trajectory_export":
        rows = list(_baseline_rows(cfg, spec.sweep_values))
        for outcome in outcomes:
            if outcome.report is None:
                rows.append({"scheme": outcome.job.scheme.value, "T_s": outcome.job.horizon, "error": outcome.error})
            else:
                rows.extend(_trajectory_rows(outcome.job.scheme.value, outcome.job.horizon, outcome.report.final_trajectory))
        files = [write_csv(output_dir / TRAJECTORY_CSV, TRAJECTORY_HEADER, rows)]
    elif spec.kind == "sweep_time":
        files = [write_csv(output_dir / SWEEP_TIME_CSV, SWEEP_TIME_HEADER, _sweep_time_rows(outcomes))]
    else:
        files = [write_csv(output_dir / SWEEP_POWER_CSV, SWEEP_POWER_HEADER, _sweep_power_rows(outcomes))]
        extra["monotonicity_violations"] = check_power_monotonicity(outcomes)

    entries = []
    for outcome in outcomes:
        entry = _summary_entry(outcome)
        if outcome.report is not None:
            entry["complexity"] = complexity_estimate(cfg.n_slots, outcome.report.iterations, cfg.solver)
        entries.append(entry)
    files.append(write_summary(output_dir / SUMMARY_FILENAME, entries, extra))
    return ExperimentResult(files=tuple(files), outcomes=tuple(outcomes))
