# tests/test_cli.py - CLI 명령어와 종료 코드 테스트

import csv
import logging
import os
import shutil
import tempfile
from pathlib import Path
from unittest.mock import patch

from cleo.testers.command_tester import CommandTester

from uavsec.cli import cli_main, create_application
from uavsec.commands.base import LOG_HANDLER, ExperimentCommand, configure_logging
from uavsec.errors import SolverError

SMALL_CONFIG = """
scenario:
  N: 8
  T_s: 120
solver:
  max_outer_iters: 5
"""


class CliTestBase:
    """임시 작업 디렉토리에서 명령 실행"""

    def setup_method(self):
        self.temp_dir = Path(tempfile.mkdtemp())
        self.original_cwd = os.getcwd()
        os.chdir(self.temp_dir)
        self.config_path = self.temp_dir / "config.yaml"
        self.config_path.write_text(SMALL_CONFIG, encoding="utf-8")

    def teardown_method(self):
        os.chdir(self.original_cwd)
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def command_tester(self, name: str) -> CommandTester:
        return CommandTester(create_application().find(name))


class TestApplication:
    def test_commands_registered(self):
        app = create_application()
        for name in ("solve", "trace", "sweep-t", "sweep-p", "trajectory", "baseline", "config"):
            assert app.has(name)


class TestExperimentCommands(CliTestBase):
    """실험 명령어 테스트"""

    def test_solve_writes_files(self):
        tester = self.command_tester("solve")
        exit_code = tester.execute(f"--config {self.config_path} --out out --scheme JTDORA --scheme anera")

        assert exit_code == 0
        assert (self.temp_dir / "out" / "solve.csv").exists()
        assert (self.temp_dir / "out" / "summary.yaml").exists()
        output = tester.io.fetch_output()
        assert "JTDORA T=120s: ASR=" in output
        assert "ANERA T=120s" in output

    def test_solve_with_integer_seed(self):
        tester = self.command_tester("solve")
        assert tester.execute(f"-c {self.config_path} -o out --seed 7") == 0

    def test_bad_seed(self):
        tester = self.command_tester("solve")
        assert tester.execute(f"-c {self.config_path} -o out --seed seven") == 1
        assert "--seed must be an integer" in tester.io.fetch_error()

    def test_unknown_scheme(self):
        tester = self.command_tester("solve")
        assert tester.execute(f"-c {self.config_path} -o out -s FOO") == 1
        assert "unknown scheme" in tester.io.fetch_error()

    def test_missing_config_file(self):
        tester = self.command_tester("solve")
        assert tester.execute("--config nope.yaml") == 1
        assert "config file not found" in tester.io.fetch_error()

    def test_infeasible_scenario(self):
        self.config_path.write_text("scenario:\n  T_s: 90\n", encoding="utf-8")
        tester = self.command_tester("solve")
        assert tester.execute(f"-c {self.config_path} -o out") == 1

    def test_solver_failure_exit_code(self, monkeypatch):
        """솔버 오류는 종료 코드 2"""

        def broken(cfg, scheme):
            raise SolverError("bisection did not bracket the budget")

        monkeypatch.setattr("uavsec.experiments.runner.bcd_solve", broken)
        tester = self.command_tester("solve")
        assert tester.execute(f"-c {self.config_path} -o out") == 2
        assert "Solver error" in tester.io.fetch_error()

    def test_sweep_records_failures_but_succeeds(self, monkeypatch):
        """스윕은 점별 실패를 기록하고 0으로 끝남"""

        def broken(cfg, scheme):
            raise SolverError("boom")

        monkeypatch.setattr("uavsec.experiments.runner.bcd_solve", broken)
        self.config_path.write_text(
            SMALL_CONFIG + "experiment:\n  sweep_values: [110, 130]\n", encoding="utf-8"
        )
        tester = self.command_tester("sweep-t")
        assert tester.execute(f"-c {self.config_path} -o out") == 0

        with open(self.temp_dir / "out" / "sweep_time.csv", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        assert [row["error"] for row in rows] == ["boom", "boom"]
        assert "failed (boom)" in tester.io.fetch_output()

    def test_baseline_command(self):
        tester = self.command_tester("baseline")
        assert tester.execute(f"-c {self.config_path} -o base") == 0

        with open(self.temp_dir / "base" / "trajectory.csv", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 8
        assert {row["scheme"] for row in rows} == {"BASELINE"}

    def test_output_dir_from_environment(self):
        tester = self.command_tester("baseline")
        with patch.dict(os.environ, {"UAVSEC_OUTPUT_DIR": "env_out"}):
            assert tester.execute(f"-c {self.config_path}") == 0
        assert (self.temp_dir / "env_out" / "trajectory.csv").exists()


class TestConfigCommand(CliTestBase):
    """config 명령어 테스트"""

    def test_init_then_show(self):
        tester = self.command_tester("config")
        assert tester.execute("init") == 0
        assert (self.temp_dir / ".uavsec" / "config.yaml").exists()
        assert "Created sample configuration file" in tester.io.fetch_output()

        tester = self.command_tester("config")
        assert tester.execute("show") == 0
        output = tester.io.fetch_output()
        assert "Current configuration:" in output
        assert ".uavsec" in output

    def test_show_explicit_config(self):
        tester = self.command_tester("config")
        assert tester.execute(f"show --config {self.config_path}") == 0
        assert "N=8" in tester.io.fetch_output()

    def test_show_without_config(self):
        """설정 파일이 없으면 T_s 누락으로 실패"""
        tester = self.command_tester("config")
        assert tester.execute("show") == 1
        assert "scenario.T_s" in tester.io.fetch_error()

    def test_unknown_action(self):
        tester = self.command_tester("config")
        assert tester.execute("frobnicate") == 1
        assert "Unknown action" in tester.io.fetch_error()


class TestCliMain(CliTestBase):
    """cli_main 종료 코드 테스트"""

    def test_success(self):
        assert cli_main(["baseline", "-c", str(self.config_path), "-o", "out"]) == 0

    def test_solve_runs_through_handle(self):
        """cleo의 run -> execute -> handle 경로로 실험 실행"""
        assert cli_main(["solve", "-c", str(self.config_path), "-o", "out", "-s", "JTDORA"]) == 0

        with open(self.temp_dir / "out" / "solve.csv", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        assert [row["scheme"] for row in rows] == ["JTDORA"]

    def test_run_kind_does_not_shadow_execute(self):
        command = create_application().find("solve")
        assert "execute" not in type(command).__dict__
        assert "execute" not in ExperimentCommand.__dict__


class TestLogging:
    def setup_method(self):
        self.logger = logging.getLogger("uavsec")
        self.saved_level = self.logger.level

    def teardown_method(self):
        self.logger.setLevel(self.saved_level)

    def test_handler_attached_once(self):
        configure_logging(logging.INFO)
        configure_logging(logging.DEBUG)

        assert self.logger.handlers.count(LOG_HANDLER) == 1
        assert self.logger.level == logging.DEBUG

    def test_config_error(self):
        assert cli_main(["solve", "-c", "missing.yaml"]) == 1

    def test_unknown_option(self):
        assert cli_main(["solve", "--bogus"]) == 1
