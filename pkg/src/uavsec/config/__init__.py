# config/__init__.py - 설정 문서 로딩 (기본값 → YAML → 환경변수 → CLI)

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import yaml

from ..bcd_driver import SchemeKind
from ..constants import (
    CONFIG_FILENAME,
    DEFAULT_ALPHA_BAR,
    DEFAULT_ALPHA_CLAMP,
    DEFAULT_ALTITUDE_M,
    DEFAULT_BISECTION_TOL,
    DEFAULT_BOB_XY,
    DEFAULT_END_XY,
    DEFAULT_EPSILON,
    DEFAULT_EVE_XY,
    DEFAULT_EXPERIMENT_KIND,
    DEFAULT_GAMMA0_DB,
    DEFAULT_INNER_TOL,
    DEFAULT_MAX_OUTER_ITERS,
    DEFAULT_N_SLOTS,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_P_AVE_DBM,
    DEFAULT_PEAK_FACTOR,
    DEFAULT_SCHEMES,
    DEFAULT_SPEED_MPS,
    DEFAULT_SPLIT,
    DEFAULT_SPLITS,
    DEFAULT_START_XY,
    DEFAULT_SWEEP_POWERS_DBM,
    DEFAULT_SWEEP_TIMES,
    DEFAULT_TRACE_TIMES,
    DEFAULT_TRAJ_MAX_ITERS,
    DEFAULT_TRAJECTORY_TIMES,
    DEFAULT_WORKERS,
    ENV_OUTPUT_DIR,
    ENV_WORKERS,
    UAVSEC_DIR,
)
from ..errors import ConfigError, ScenarioError
from ..experiments.spec import ExperimentSpec
from ..scenario import PowerBudget, ScenarioConfig, SolverTolerances, db_to_linear, dbm_to_watts

logger = logging.getLogger(__name__)

SECTION_KEYS = {
    "scenario": ("N", "T_s", "H_m", "V_mps", "gamma0_dB", "bob_xy", "eve_xy", "start_xy", "end_xy", "pin_final_waypoint"),
    "power": ("P_ave_dBm", "lambda", "peak_factor", "alpha_bar"),
    "solver": ("epsilon", "max_outer_iters", "bisection_tol", "inner_tol", "alpha_clamp", "traj_max_iters"),
    "experiment": ("kind", "schemes", "sweep_values", "splits", "output_dir", "workers"),
}

# 종류별 기본 스윕 값 (sweep_values를 주지 않은 경우)
DEFAULT_SWEEPS = {
    "solve": (),
    "trace": DEFAULT_TRACE_TIMES,
    "trajectory_export": DEFAULT_TRAJECTORY_TIMES,
    "sweep_time": DEFAULT_SWEEP_TIMES,
    "sweep_power": DEFAULT_SWEEP_POWERS_DBM,
}


def get_default_config() -> Dict[str, Dict[str, Any]]:
    """기본 설정값 반환 (T_s는 기본값 없음)"""
    return {
        "scenario": {
            "N": DEFAULT_N_SLOTS,
            "T_s": None,
            "H_m": DEFAULT_ALTITUDE_M,
            "V_mps": DEFAULT_SPEED_MPS,
            "gamma0_dB": DEFAULT_GAMMA0_DB,
            "bob_xy": list(DEFAULT_BOB_XY),
            "eve_xy": list(DEFAULT_EVE_XY),
            "start_xy": list(DEFAULT_START_XY),
            "end_xy": list(DEFAULT_END_XY),
            "pin_final_waypoint": True,
        },
        "power": {
            "P_ave_dBm": DEFAULT_P_AVE_DBM,
            "lambda": DEFAULT_SPLIT,
            "peak_factor": DEFAULT_PEAK_FACTOR,
            "alpha_bar": DEFAULT_ALPHA_BAR,
        },
        "solver": {
            "epsilon": DEFAULT_EPSILON,
            "max_outer_iters": DEFAULT_MAX_OUTER_ITERS,
            "bisection_tol": DEFAULT_BISECTION_TOL,
            "inner_tol": DEFAULT_INNER_TOL,
            "alpha_clamp": DEFAULT_ALPHA_CLAMP,
            "traj_max_iters": DEFAULT_TRAJ_MAX_ITERS,
        },
        "experiment": {
            "kind": DEFAULT_EXPERIMENT_KIND,
            "schemes": list(DEFAULT_SCHEMES),
            "sweep_values": None,
            "splits": list(DEFAULT_SPLITS),
            "output_dir": DEFAULT_OUTPUT_DIR,
            "workers": DEFAULT_WORKERS,
        },
    }


def parse_config_text(text: str) -> Dict[str, Any]:
    """YAML 텍스트를 검증된 중첩 딕셔너리로 해석"""
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML: {e}") from e

    if document is None:
        return {}
    if not isinstance(document, Mapping):
        raise ConfigError(f"config document must be a mapping, got {type(document).__name__}")
    return validate_config(document)


def load_config_file(config_path: str) -> Dict[str, Any]:
    """설정 파일 로딩"""
    path = Path(config_path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    return parse_config_text(text)


def find_config_file() -> Optional[str]:
    """설정 파일 위치 찾기 (현재 디렉토리와 상위 3단계)"""
    current_dir = Path.cwd()
    for directory in [current_dir, *current_dir.parents[:3]]:
        config_file = directory / UAVSEC_DIR / CONFIG_FILENAME
        if config_file.exists():
            return str(config_file)
    return None


def load_env_config() -> Dict[str, Any]:
    """환경변수에서 설정 로딩"""
    experiment = {}
    if ENV_OUTPUT_DIR in os.environ:
        experiment["output_dir"] = os.environ[ENV_OUTPUT_DIR]
    if ENV_WORKERS in os.environ:
        experiment["workers"] = os.environ[ENV_WORKERS]
    return {"experiment": experiment} if experiment else {}


def validate_config(config: Mapping[str, Any]) -> Dict[str, Any]:
    """알 수 없는 섹션은 오류, 알 수 없는 키는 경고 후 무시"""
    validated: Dict[str, Any] = {}
    for section, values in config.items():
        if section not in SECTION_KEYS:
            raise ConfigError(f"unknown config section '{section}' (valid: {', '.join(SECTION_KEYS)})")
        if values is None:
            continue
        if not isinstance(values, Mapping):
            raise ConfigError(f"config section '{section}' must be a mapping")
        kept = {}
        for key, value in values.items():
            if key in SECTION_KEYS[section]:
                kept[key] = value
            else:
                logger.warning("Ignoring unknown config key %s.%s", section, key)
        validated[section] = kept
    return validated


def merge_config(base: Dict[str, Dict[str, Any]], *layers: Mapping[str, Any]) -> Dict[str, Dict[str, Any]]:
    """섹션 단위로 얕게 덮어쓰기 (뒤쪽 레이어 우선)"""
    merged = copy.deepcopy(base)
    for layer in layers:
        for section, values in layer.items():
            merged.setdefault(section, {}).update(values)
    return merged


def _number(value: Any, key: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"malformed number for {key}: {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"malformed number for {key}: {value!r}") from None


def _integer(value: Any, key: str) -> int:
    number = _number(value, key)
    if not number.is_integer():
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return int(number)


def _pair(value: Any, key: str) -> Tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{key} must be a pair of numbers, got {value!r}")
    return (_number(value[0], key), _number(value[1], key))


def _numbers(value: Any, key: str) -> Tuple[float, ...]:
    if isinstance(value, (int, float, str)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{key} must be a list of numbers, got {value!r}")
    return tuple(_number(item, key) for item in value)


def _flag(value: Any, key: str) -> bool:
    if isinstance(value, bool):
        return value
    raise ConfigError(f"{key} must be true or false, got {value!r}")


def build_scenario(resolved: Mapping[str, Mapping[str, Any]]) -> ScenarioConfig:
    """해석된 설정에서 ScenarioConfig 생성 (dB, dBm은 여기서 변환)"""
    scenario = resolved["scenario"]
    power = resolved["power"]
    solver = resolved["solver"]

    if scenario.get("T_s") is None:
        raise ConfigError("missing required key scenario.T_s")

    budgets = PowerBudget(
        p_ave_w=dbm_to_watts(_number(power["P_ave_dBm"], "power.P_ave_dBm")),
        split=_number(power["lambda"], "power.lambda"),
        peak_factor=_number(power["peak_factor"], "power.peak_factor"),
        alpha_bar=_number(power["alpha_bar"], "power.alpha_bar"),
    )
    tolerances = SolverTolerances(
        epsilon=_number(solver["epsilon"], "solver.epsilon"),
        max_outer_iters=_integer(solver["max_outer_iters"], "solver.max_outer_iters"),
        bisection_tol=_number(solver["bisection_tol"], "solver.bisection_tol"),
        inner_tol=_number(solver["inner_tol"], "solver.inner_tol"),
        alpha_clamp=_number(solver["alpha_clamp"], "solver.alpha_clamp"),
        traj_max_iters=_integer(solver["traj_max_iters"], "solver.traj_max_iters"),
    )
    return ScenarioConfig(
        n_slots=_integer(scenario["N"], "scenario.N"),
        horizon_s=_number(scenario["T_s"], "scenario.T_s"),
        altitude_m=_number(scenario["H_m"], "scenario.H_m"),
        speed_mps=_number(scenario["V_mps"], "scenario.V_mps"),
        gamma0=db_to_linear(_number(scenario["gamma0_dB"], "scenario.gamma0_dB")),
        bob_xy=_pair(scenario["bob_xy"], "scenario.bob_xy"),
        eve_xy=_pair(scenario["eve_xy"], "scenario.eve_xy"),
        start_xy=_pair(scenario["start_xy"], "scenario.start_xy"),
        end_xy=_pair(scenario["end_xy"], "scenario.end_xy"),
        budgets=budgets,
        solver=tolerances,
        pin_final_waypoint=_flag(scenario["pin_final_waypoint"], "scenario.pin_final_waypoint"),
    )


def build_experiment(resolved: Mapping[str, Mapping[str, Any]]) -> ExperimentSpec:
    """해석된 설정에서 ExperimentSpec 생성"""
    experiment = resolved["experiment"]
    kind = str(experiment["kind"])

    schemes = experiment["schemes"]
    if isinstance(schemes, str):
        schemes = [schemes]
    if not isinstance(schemes, (list, tuple)):
        raise ConfigError(f"experiment.schemes must be a list, got {schemes!r}")
    try:
        parsed = tuple(SchemeKind.parse(name) for name in schemes)
    except ScenarioError as e:
        raise ConfigError(str(e)) from e

    sweep_values = experiment["sweep_values"]
    if sweep_values is None:
        sweep_values = DEFAULT_SWEEPS.get(kind, ())

    return ExperimentSpec(
        kind=kind,
        schemes=parsed,
        sweep_values=_numbers(sweep_values, "experiment.sweep_values"),
        splits=_numbers(experiment["splits"], "experiment.splits"),
        output_dir=Path(str(experiment["output_dir"])),
        workers=_integer(experiment["workers"], "experiment.workers"),
    )


def _build(
    document: Mapping[str, Any], overrides: Optional[Mapping[str, Any]], use_env: bool
) -> Tuple[ScenarioConfig, ExperimentSpec]:
    layers = [document]
    if use_env:
        layers.append(load_env_config())
    if overrides:
        layers.append(overrides)
    resolved = merge_config(get_default_config(), *layers)
    return build_scenario(resolved), build_experiment(resolved)


def load_config(
    text: str,
    overrides: Optional[Mapping[str, Any]] = None,
    use_env: bool = True,
) -> Tuple[ScenarioConfig, ExperimentSpec]:
    """
    설정 문서를 시나리오와 실험 명세로 변환

    Args:
        text: YAML 설정 문서
        overrides: 명령행 플래그 등 최우선 값 (설정 문서와 같은 중첩 구조)
        use_env: 환경변수 레이어 적용 여부

    Returns:
        (ScenarioConfig, ExperimentSpec)
    """
    return _build(parse_config_text(text), overrides, use_env)


def resolve_config(
    config_path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> Tuple[ScenarioConfig, ExperimentSpec, Optional[str]]:
    """명시된 경로 또는 탐색된 설정 파일을 읽어 load_config 적용"""
    source = config_path or find_config_file()
    document = load_config_file(source) if source is not None else {}
    cfg, spec = _build(document, overrides, use_env=True)
    return cfg, spec, source


def create_sample_config(path: Optional[str] = None) -> str:
    """샘플 설정 파일 생성"""
    if path is None:
        path = str(Path(UAVSEC_DIR) / CONFIG_FILENAME)

    sample_config = get_default_config()
    sample_config["scenario"]["T_s"] = 120.0
    sample_config["experiment"].pop("sweep_values")

    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write("# uavsec configuration\n")
        f.write("# distances in meters, times in seconds, powers in dBm, gamma0 in dB\n\n")
        yaml.safe_dump(sample_config, f, default_flow_style=None, sort_keys=False)

    return path


def describe_config(cfg: ScenarioConfig, spec: ExperimentSpec, source: Optional[str]) -> List[str]:
    """현재 설정 정보를 사람이 읽는 줄 목록으로"""
    budgets = cfg.budgets
    lines = [
        "Current configuration:",
        f"  Config file: {source or 'Not found (using defaults)'}",
        f"  Slots: N={cfg.n_slots}, T={cfg.horizon_s:g} s, H={cfg.altitude_m:g} m, V={cfg.speed_mps:g} m/s",
        f"  gamma0: {cfg.gamma0:.6g}",
        f"  Bob {cfg.bob_xy}, Eve {cfg.eve_xy}, start {cfg.start_xy}, end {cfg.end_xy}",
        f"  Power: P_ave={budgets.p_ave_w:.6g} W, lambda={budgets.split:g}, peak factor={budgets.peak_factor:g}",
        f"  Solver: epsilon={cfg.solver.epsilon:g}, max outer iterations={cfg.solver.max_outer_iters}",
        f"  Experiment: {spec.kind}, schemes={', '.join(s.value for s in spec.schemes)}",
        f"  Output directory: {spec.output_dir}",
        f"  Workers: {spec.workers}",
    ]

    env_vars = [f"{name}={os.environ[name]}" for name in (ENV_OUTPUT_DIR, ENV_WORKERS) if name in os.environ]
    if env_vars:
        lines.append(f"  Environment variables: {', '.join(env_vars)}")
    return lines
