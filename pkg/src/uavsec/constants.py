# constants.py - uavsec 상수 정의

# 시뮬레이션 기본값
DEFAULT_N_SLOTS = 100
DEFAULT_ALTITUDE_M = 100.0
DEFAULT_SPEED_MPS = 4.0
DEFAULT_GAMMA0_DB = 80.0
DEFAULT_BOB_XY = (0.0, 0.0)
DEFAULT_EVE_XY = (100.0, 0.0)
DEFAULT_START_XY = (50.0, 200.0)
DEFAULT_END_XY = (50.0, -200.0)
DEFAULT_P_AVE_DBM = 0.0
DEFAULT_SPLIT = 0.5
DEFAULT_PEAK_FACTOR = 4.0
DEFAULT_ALPHA_BAR = 0.5

# 솔버 허용오차 기본값
DEFAULT_EPSILON = 1e-4
DEFAULT_MAX_OUTER_ITERS = 50
DEFAULT_BISECTION_TOL = 1e-12
DEFAULT_INNER_TOL = 1e-6
DEFAULT_ALPHA_CLAMP = 1e-6
DEFAULT_TRAJ_MAX_ITERS = 200

# 수치 가드
TRAJECTORY_SLACK_M = 1e-9
RATIO_FLOOR = 1e-12
LAMBDA_MIN = 1e-12
DOMAIN_GUARD_RATIO = 1e-6
KKT_ACTIVE_MARGIN = 1e-4
MAX_BISECTION_STEPS = 400

# 실험 기본값
DEFAULT_EXPERIMENT_KIND = "solve"
DEFAULT_SCHEMES = ("JTDORA",)
DEFAULT_TRACE_TIMES = (110.0, 130.0, 150.0)
DEFAULT_TRAJECTORY_TIMES = (100.0, 120.0, 150.0)
DEFAULT_SWEEP_TIMES = (100.0, 110.0, 120.0, 130.0, 140.0, 150.0, 160.0)
DEFAULT_SWEEP_POWERS_DBM = (-10.0, -8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
DEFAULT_SPLITS = (0.5,)
DEFAULT_OUTPUT_DIR = "results"
DEFAULT_WORKERS = 1

EXPERIMENT_KINDS = {"solve", "trace", "trajectory_export", "sweep_time", "sweep_power"}

# uavsec 디렉토리 및 파일들
UAVSEC_DIR = ".uavsec"
CONFIG_FILENAME = "config.yaml"
SUMMARY_FILENAME = "summary.yaml"

# 환경변수명들
ENV_OUTPUT_DIR = "UAVSEC_OUTPUT_DIR"
ENV_WORKERS = "UAVSEC_WORKERS"

# CSV 파일명과 헤더
SOLVE_CSV = "solve.csv"
TRACE_CSV = "trace.csv"
TRAJECTORY_CSV = "trajectory.csv"
SWEEP_TIME_CSV = "sweep_time.csv"
SWEEP_POWER_CSV = "sweep_power.csv"

TRACE_HEADER = ("scheme", "T_s", "iteration", "asr_bpshz", "error")
TRAJECTORY_HEADER = ("scheme", "T_s", "slot", "x_m", "y_m", "error")
SWEEP_TIME_HEADER = ("scheme", "T_s", "asr_bpshz", "error")
SWEEP_POWER_HEADER = ("scheme", "lambda", "P_ave_dBm", "asr_bpshz", "error")
SOLVE_HEADER = ("scheme", "T_s", "iterations", "converged", "asr_bpshz", "error")

BASELINE_LABEL = "BASELINE"

# 종료 코드
EXIT_CONFIG_ERROR = 1
EXIT_SOLVER_ERROR = 2
