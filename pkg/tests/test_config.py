# tests/test_config.py - 설정 문서 로딩과 검증 테스트

import logging
import os
import shutil
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from uavsec.bcd_driver import SchemeKind
from uavsec.config import (
    create_sample_config,
    describe_config,
    find_config_file,
    load_config,
    load_config_file,
    resolve_config,
)
from uavsec.errors import ConfigError, ScenarioError

MINIMAL = "scenario:\n  T_s: 120\n"


class TestLoadConfig:
    """load_config 테스트"""

    def test_empty_document_names_missing_key(self):
        """빈 문서는 scenario.T_s 누락 오류"""
        with pytest.raises(ConfigError, match="scenario.T_s"):
            load_config("", use_env=False)

    def test_defaults_and_unit_conversion(self):
        """T_s만 주면 나머지는 기본값, dB/dBm은 선형 단위로 변환"""
        cfg, spec = load_config(MINIMAL, use_env=False)

        assert cfg.n_slots == 100
        assert cfg.horizon_s == 120.0
        assert cfg.altitude_m == 100.0
        assert cfg.gamma0 == pytest.approx(1e8)
        assert cfg.budgets.p_ave_w == pytest.approx(1e-3)
        assert cfg.budgets.p_hat_a == pytest.approx(4e-3)
        assert cfg.bob_xy == (0.0, 0.0)
        assert cfg.eve_xy == (100.0, 0.0)
        assert cfg.pin_final_waypoint is True

        assert spec.kind == "solve"
        assert spec.schemes == (SchemeKind.JTDORA,)
        assert spec.sweep_values == ()
        assert spec.output_dir == Path("results")

    def test_full_document(self):
        text = """
scenario:
  N: 50
  T_s: 150
  gamma0_dB: 70
  eve_xy: [80, -20]
power:
  P_ave_dBm: 10
  lambda: 0.7
solver:
  epsilon: 1.0e-5
  max_outer_iters: 20
experiment:
  kind: sweep_time
  schemes: [jtdora, ANERA]
  sweep_values: [100, 120]
  workers: 2
"""
        cfg, spec = load_config(text, use_env=False)

        assert cfg.n_slots == 50
        assert cfg.gamma0 == pytest.approx(1e7)
        assert cfg.eve_xy == (80.0, -20.0)
        assert cfg.budgets.p_ave_w == pytest.approx(1e-2)
        assert cfg.budgets.p_bar_a == pytest.approx(7e-3)
        assert cfg.solver.epsilon == pytest.approx(1e-5)
        assert cfg.solver.max_outer_iters == 20
        assert spec.kind == "sweep_time"
        assert spec.schemes == (SchemeKind.JTDORA, SchemeKind.ANERA)
        assert spec.sweep_values == (100.0, 120.0)
        assert spec.workers == 2

    def test_default_sweep_values_per_kind(self):
        _, spec = load_config(MINIMAL + "experiment:\n  kind: sweep_power\n", use_env=False)
        assert spec.sweep_values[0] == -10.0
        assert spec.sweep_values[-1] == 10.0
        assert spec.splits == (0.5,)

    @pytest.mark.parametrize(
        "text",
        [
            "scenario: [1, 2]\n",
            "- just\n- a list\n",
            "scenario:\n  T_s: abc\n",
            "scenario:\n  T_s: 120\n  N: 10.5\n",
            "scenario:\n  T_s: 120\n  bob_xy: [1, 2, 3]\n",
            "scenario:\n  T_s: 120\n  pin_final_waypoint: maybe\n",
            "scenario:\n  T_s: 120\nbogus:\n  key: 1\n",
            "scenario: {T_s: 120\n",
        ],
    )
    def test_malformed_documents(self, text):
        with pytest.raises(ConfigError):
            load_config(text, use_env=False)

    def test_infeasible_scenario(self):
        """T=90은 400 m를 4 m/s로 갈 수 없음"""
        with pytest.raises(ScenarioError, match="infeasible"):
            load_config("scenario:\n  T_s: 90\n", use_env=False)

    def test_unknown_scheme_is_config_error(self):
        with pytest.raises(ConfigError, match="unknown scheme"):
            load_config(MINIMAL + "experiment:\n  schemes: [FOO]\n", use_env=False)

    def test_unsorted_sweep_values(self):
        with pytest.raises(ConfigError, match="sorted"):
            load_config(MINIMAL + "experiment:\n  kind: sweep_time\n  sweep_values: [120, 100]\n", use_env=False)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError, match="unknown experiment kind"):
            load_config(MINIMAL + "experiment:\n  kind: movie\n", use_env=False)

    def test_unknown_key_warns(self, caplog):
        """알 수 없는 키는 경고 후 무시"""
        with caplog.at_level(logging.WARNING, logger="uavsec"):
            cfg, _ = load_config(MINIMAL + "  colour: blue\n", use_env=False)
        assert cfg.horizon_s == 120.0
        assert "scenario.colour" in caplog.text

    def test_overrides_take_precedence(self):
        """CLI 값 > 환경변수 > 설정 문서"""
        text = MINIMAL + "experiment:\n  output_dir: from_file\n"
        with patch.dict(os.environ, {"UAVSEC_OUTPUT_DIR": "from_env"}):
            _, spec = load_config(text)
            assert spec.output_dir == Path("from_env")
            _, spec = load_config(text, overrides={"experiment": {"output_dir": "from_cli"}})
            assert spec.output_dir == Path("from_cli")

    def test_env_workers(self):
        with patch.dict(os.environ, {"UAVSEC_WORKERS": "3"}):
            _, spec = load_config(MINIMAL)
        assert spec.workers == 3

    def test_env_ignored_when_disabled(self):
        with patch.dict(os.environ, {"UAVSEC_WORKERS": "3"}):
            _, spec = load_config(MINIMAL, use_env=False)
        assert spec.workers == 1


class TestConfigFiles:
    """설정 파일 탐색과 생성 테스트"""

    def setup_method(self):
        """각 테스트 전에 임시 작업 디렉토리로 이동"""
        self.temp_dir = Path(tempfile.mkdtemp())
        self.original_cwd = os.getcwd()
        os.chdir(self.temp_dir)

    def teardown_method(self):
        """각 테스트 후에 원래 디렉토리 복원"""
        os.chdir(self.original_cwd)
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            load_config_file(str(self.temp_dir / "nope.yaml"))

    def test_find_config_in_parent(self):
        """상위 디렉토리의 .uavsec/config.yaml 탐색"""
        config_dir = self.temp_dir / ".uavsec"
        config_dir.mkdir()
        (config_dir / "config.yaml").write_text(MINIMAL)
        nested = self.temp_dir / "a" / "b"
        nested.mkdir(parents=True)
        os.chdir(nested)

        found = find_config_file()
        assert found is not None
        assert Path(found).resolve() == (config_dir / "config.yaml").resolve()

    def test_sample_config_round_trip(self):
        """생성한 샘플 설정을 다시 읽으면 T=120 기본 시나리오"""
        path = create_sample_config()
        assert Path(path) == Path(".uavsec") / "config.yaml"

        cfg, spec, source = resolve_config()
        assert source is not None
        assert cfg.horizon_s == 120.0
        assert cfg.n_slots == 100
        assert spec.schemes == (SchemeKind.JTDORA,)

    def test_explicit_path_wins(self):
        explicit = self.temp_dir / "custom.yaml"
        explicit.write_text("scenario:\n  T_s: 150\n")
        create_sample_config()

        cfg, _, source = resolve_config(str(explicit))
        assert source == str(explicit)
        assert cfg.horizon_s == 150.0

    def test_describe_config(self):
        cfg, spec = load_config(MINIMAL, use_env=False)
        lines = describe_config(cfg, spec, None)
        assert lines[0] == "Current configuration:"
        assert any("Not found" in line for line in lines)
        assert any("JTDORA" in line for line in lines)
