# tests/test_experiments.py - 실험 실행과 결과 파일 기록 테스트

import csv
import shutil
import tempfile
from pathlib import Path
from unittest.mock import MagicMock

import pytest
import yaml

from uavsec.bcd_driver import SchemeKind
from uavsec.constants import (
    BASELINE_LABEL,
    SOLVE_HEADER,
    SWEEP_POWER_HEADER,
    SWEEP_TIME_HEADER,
    TRACE_HEADER,
    TRAJECTORY_HEADER,
)
from uavsec.errors import ConfigError
from uavsec.experiments import ExperimentSpec, JobOutcome, SolveJob, export_baseline, run_experiment
from uavsec.experiments.results import format_value
from uavsec.experiments.runner import check_power_monotonicity, execute_jobs, prepare_output_dir
from uavsec.scenario import SolverTolerances, Trajectory, validate_trajectory


def read_rows(path):
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        return reader.fieldnames, list(reader)


class ExperimentTestBase:
    """작은 시나리오(N=8)와 임시 출력 디렉토리"""

    def setup_method(self):
        self.temp_dir = Path(tempfile.mkdtemp())

    def teardown_method(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def small_config(self, make_config, **changes):
        params = dict(n_slots=8, horizon_s=120.0, solver=SolverTolerances(max_outer_iters=5))
        params.update(changes)
        return make_config(**params)

    def spec(self, kind, schemes=("JTDORA",), sweep_values=(), splits=(0.5,), out="out", workers=1):
        return ExperimentSpec(
            kind=kind,
            schemes=tuple(SchemeKind.parse(s) for s in schemes),
            sweep_values=tuple(sweep_values),
            splits=tuple(splits),
            output_dir=self.temp_dir / out,
            workers=workers,
        )


class TestFormatValue:
    def test_cells(self):
        assert format_value(None) == ""
        assert format_value(True) == "true"
        assert format_value(0.1) == "0.1"
        assert format_value(1 / 3) == repr(1 / 3)
        assert format_value(7) == "7"


class TestSolveExperiment(ExperimentTestBase):
    """solve 종류 테스트"""

    def test_writes_solve_csv_and_summary(self, make_config):
        cfg = self.small_config(make_config)
        result = run_experiment(self.spec("solve", schemes=("JTDORA", "ANERA")), cfg)

        names = [path.name for path in result.files]
        assert names == ["solve.csv", "summary.yaml"]

        header, rows = read_rows(result.files[0])
        assert tuple(header) == SOLVE_HEADER
        assert [row["scheme"] for row in rows] == ["JTDORA", "ANERA"]
        assert all(row["error"] == "" for row in rows)
        assert float(rows[0]["asr_bpshz"]) >= float(rows[1]["asr_bpshz"])
        assert rows[1]["iterations"] == "0"
        assert rows[1]["converged"] == "true"

        summary = yaml.safe_load(result.files[1].read_text(encoding="utf-8"))
        assert summary["kind"] == "solve"
        assert len(summary["solves"]) == 2
        first = summary["solves"][0]
        assert first["scheme"] == "JTDORA"
        assert first["asr_bpshz"] == pytest.approx(float(rows[0]["asr_bpshz"]))
        assert first["complexity"]["total"] > 0

    def test_rerun_is_byte_identical(self, make_config):
        """같은 설정을 다시 돌리면 CSV가 바이트 단위로 같음"""
        cfg = self.small_config(make_config)
        first = run_experiment(self.spec("solve", out="a"), cfg)
        second = run_experiment(self.spec("solve", out="b"), cfg)
        assert first.files[0].read_bytes() == second.files[0].read_bytes()

    def test_solve_failure_propagates(self, make_config, monkeypatch):
        """solve 종류는 실패를 error 칸으로 삼키지 않음"""
        from uavsec.errors import SolverError

        def broken(cfg, scheme):
            raise SolverError("bisection did not bracket")

        monkeypatch.setattr("uavsec.experiments.runner.bcd_solve", broken)
        with pytest.raises(SolverError):
            run_experiment(self.spec("solve"), self.small_config(make_config))


class TestSweepExperiments(ExperimentTestBase):
    """스윕 종류 테스트"""

    def test_trace_rows_start_at_iteration_zero(self, make_config):
        cfg = self.small_config(make_config)
        result = run_experiment(self.spec("trace", sweep_values=(110.0, 130.0)), cfg)

        header, rows = read_rows(result.files[0])
        assert tuple(header) == TRACE_HEADER
        for horizon in ("110.0", "130.0"):
            trace = [float(row["asr_bpshz"]) for row in rows if row["T_s"] == horizon]
            iterations = [int(row["iteration"]) for row in rows if row["T_s"] == horizon]
            assert iterations == list(range(len(trace)))
            assert all(b >= a - 1e-9 for a, b in zip(trace, trace[1:]))

    def test_infeasible_point_is_recorded(self, make_config):
        """실현 불가능한 T는 error 칸에 남기고 나머지는 계속 실행"""
        cfg = self.small_config(make_config)
        result = run_experiment(self.spec("sweep_time", schemes=("ANERA",), sweep_values=(90.0, 120.0)), cfg)

        header, rows = read_rows(result.files[0])
        assert tuple(header) == SWEEP_TIME_HEADER
        assert rows[0]["T_s"] == "90.0"
        assert rows[0]["asr_bpshz"] == ""
        assert "infeasible" in rows[0]["error"]
        assert rows[1]["error"] == ""
        assert float(rows[1]["asr_bpshz"]) > 0

        summary = yaml.safe_load(result.files[1].read_text(encoding="utf-8"))
        assert summary["solves"][0]["error"]
        assert "complexity" not in summary["solves"][0]

    def test_trajectory_export_lists_baseline_first(self, make_config):
        cfg = self.small_config(make_config)
        result = run_experiment(self.spec("trajectory_export", sweep_values=(100.0, 150.0)), cfg)

        header, rows = read_rows(result.files[0])
        assert tuple(header) == TRAJECTORY_HEADER
        assert len(rows) == 4 * 8
        assert all(row["scheme"] == BASELINE_LABEL for row in rows[:16])
        assert all(row["scheme"] == "JTDORA" for row in rows[16:])

        for horizon in ("100.0", "150.0"):
            points = [
                (float(row["x_m"]), float(row["y_m"]))
                for row in rows
                if row["scheme"] == "JTDORA" and row["T_s"] == horizon
            ]
            assert validate_trajectory(Trajectory(points), self.small_config(make_config, horizon_s=float(horizon))) == []

    def test_power_sweep(self, make_config):
        cfg = self.small_config(make_config)
        spec = self.spec("sweep_power", schemes=("ANOPC",), sweep_values=(-10.0, 0.0, 10.0), splits=(0.3, 0.7))
        result = run_experiment(spec, cfg)

        header, rows = read_rows(result.files[0])
        assert tuple(header) == SWEEP_POWER_HEADER
        assert [(row["lambda"], row["P_ave_dBm"]) for row in rows] == [
            ("0.3", "-10.0"), ("0.3", "0.0"), ("0.3", "10.0"),
            ("0.7", "-10.0"), ("0.7", "0.0"), ("0.7", "10.0"),
        ]

        summary = yaml.safe_load(result.files[1].read_text(encoding="utf-8"))
        assert summary["kind"] == "sweep_power"
        assert summary["monotonicity_violations"] == []

    def test_workers_keep_submission_order(self, make_config):
        """워커 풀을 써도 결과 순서와 값은 순차 실행과 같음"""
        cfg = self.small_config(make_config)
        jobs = [SolveJob(SchemeKind.ANOPC, cfg, horizon_s=horizon) for horizon in (110.0, 120.0, 130.0)]

        serial = execute_jobs(jobs, workers=1)
        parallel = execute_jobs(jobs, workers=2)

        assert [o.job.horizon for o in parallel] == [110.0, 120.0, 130.0]
        assert [o.report.final_asr for o in parallel] == [o.report.final_asr for o in serial]


class TestPowerMonotonicity:
    """check_power_monotonicity 테스트"""

    def outcome(self, make_config, p_ave_dbm, asr, split=0.5):
        job = SolveJob(SchemeKind.JTDORA, make_config(), p_ave_dbm=p_ave_dbm, split=split)
        return JobOutcome(job=job, report=MagicMock(final_asr=asr))

    def test_non_decreasing_series(self, make_config):
        outcomes = [self.outcome(make_config, p, asr) for p, asr in ((-10.0, 0.1), (0.0, 0.3), (10.0, 0.3))]
        assert check_power_monotonicity(outcomes) == []

    def test_drop_is_reported(self, make_config):
        outcomes = [self.outcome(make_config, p, asr) for p, asr in ((0.0, 0.5), (-10.0, 0.1), (10.0, 0.4))]
        problems = check_power_monotonicity(outcomes)
        assert len(problems) == 1
        assert "JTDORA" in problems[0]

    def test_failed_points_are_skipped(self, make_config):
        failed = JobOutcome(job=SolveJob(SchemeKind.JTDORA, make_config(), p_ave_dbm=5.0, split=0.5), report=None, error="x")
        outcomes = [self.outcome(make_config, 0.0, 0.2), failed, self.outcome(make_config, 10.0, 0.3)]
        assert check_power_monotonicity(outcomes) == []


class TestOutputFiles(ExperimentTestBase):
    def test_unwritable_output_dir(self):
        blocker = self.temp_dir / "file"
        blocker.write_text("not a directory")
        with pytest.raises(ConfigError, match="not writable"):
            prepare_output_dir(blocker / "sub")

    def test_export_baseline(self, make_config):
        cfg = make_config(horizon_s=120.0)
        path = export_baseline(cfg, self.temp_dir / "base")

        header, rows = read_rows(path)
        assert path.name == "trajectory.csv"
        assert tuple(header) == TRAJECTORY_HEADER
        assert len(rows) == cfg.n_slots
        assert all(row["scheme"] == BASELINE_LABEL for row in rows)
        assert (float(rows[-1]["x_m"]), float(rows[-1]["y_m"])) == pytest.approx(cfg.end_xy)

    def test_export_baseline_infeasible_horizon(self, make_config):
        path = export_baseline(make_config(), self.temp_dir, horizons=(90.0,))
        _, rows = read_rows(path)
        assert len(rows) == 1
        assert "infeasible" in rows[0]["error"]
