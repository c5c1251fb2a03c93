# scenario.py - 시나리오, 채널 이득, 이동 제약, 기준(best-effort) 궤적

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .constants import (
    DEFAULT_ALPHA_BAR,
    DEFAULT_ALPHA_CLAMP,
    DEFAULT_BISECTION_TOL,
    DEFAULT_EPSILON,
    DEFAULT_INNER_TOL,
    DEFAULT_MAX_OUTER_ITERS,
    DEFAULT_TRAJ_MAX_ITERS,
    MAX_BISECTION_STEPS,
    TRAJECTORY_SLACK_M,
)
from .errors import ScenarioError

logger = logging.getLogger(__name__)

Point = Tuple[float, float]
ArrayLike = Union[Sequence[float], np.ndarray]


def _as_point(value: ArrayLike, name: str) -> Point:
    """좌표 쌍을 (float, float) 튜플로 정규화"""
    arr = np.asarray(value, dtype=float)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise ScenarioError(f"{name} must be a finite coordinate pair, got {value!r}")
    return (float(arr[0]), float(arr[1]))


@dataclass(frozen=True)
class PowerBudget:
    """평균/최대 전력 예산 (P̄_a = λ·P_ave, P̄_b = (1−λ)·P_ave, P̂ = peak_factor·P_ave)"""

    p_ave_w: float
    split: float
    peak_factor: float
    alpha_bar: float = DEFAULT_ALPHA_BAR

    def __post_init__(self):
        if not self.p_ave_w > 0:
            raise ScenarioError(f"p_ave_w must be positive, got {self.p_ave_w}")
        if not 0 < self.split < 1:
            raise ScenarioError(f"split must lie in (0, 1), got {self.split}")
        if not self.peak_factor > 0:
            raise ScenarioError(f"peak_factor must be positive, got {self.peak_factor}")
        if not 0 <= self.alpha_bar <= 1:
            raise ScenarioError(f"alpha_bar must lie in [0, 1], got {self.alpha_bar}")
        # 평균 전력 제약이 의미를 가지려면 평균 예산이 최대 전력보다 작아야 함
        if not (self.p_bar_a < self.p_hat_a and self.p_bar_b < self.p_hat_b):
            raise ScenarioError(
                "average budgets must stay below the peak powers "
                f"(P̄_a={self.p_bar_a}, P̄_b={self.p_bar_b}, P̂={self.p_hat_a})"
            )

    @property
    def p_bar_a(self) -> float:
        return self.split * self.p_ave_w

    @property
    def p_bar_b(self) -> float:
        return (1.0 - self.split) * self.p_ave_w

    @property
    def p_hat_a(self) -> float:
        return self.peak_factor * self.p_ave_w

    @property
    def p_hat_b(self) -> float:
        return self.peak_factor * self.p_ave_w


@dataclass(frozen=True)
class SolverTolerances:
    """솔버 허용오차"""

    epsilon: float = DEFAULT_EPSILON
    max_outer_iters: int = DEFAULT_MAX_OUTER_ITERS
    bisection_tol: float = DEFAULT_BISECTION_TOL
    inner_tol: float = DEFAULT_INNER_TOL
    alpha_clamp: float = DEFAULT_ALPHA_CLAMP
    traj_max_iters: int = DEFAULT_TRAJ_MAX_ITERS

    def __post_init__(self):
        for name in ("epsilon", "bisection_tol", "inner_tol", "alpha_clamp"):
            if not getattr(self, name) > 0:
                raise ScenarioError(f"{name} must be positive, got {getattr(self, name)}")
        if self.alpha_clamp >= 0.5:
            raise ScenarioError(f"alpha_clamp must be below 0.5, got {self.alpha_clamp}")
        for name in ("max_outer_iters", "traj_max_iters"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ScenarioError(f"{name} must be a positive integer, got {value}")


@dataclass(frozen=True)
class ScenarioConfig:
    """물리 시나리오: 기하, 시간 이산화, 채널 상수, 전력 예산, 솔버 설정"""

    n_slots: int
    horizon_s: float
    altitude_m: float
    speed_mps: float
    gamma0: float
    bob_xy: Point
    eve_xy: Point
    start_xy: Point
    end_xy: Point
    budgets: PowerBudget
    solver: SolverTolerances = field(default_factory=SolverTolerances)
    pin_final_waypoint: bool = True

    def __post_init__(self):
        if isinstance(self.n_slots, bool) or int(self.n_slots) != self.n_slots or self.n_slots < 1:
            raise ScenarioError(f"n_slots must be a positive integer, got {self.n_slots}")
        object.__setattr__(self, "n_slots", int(self.n_slots))
        for name in ("horizon_s", "altitude_m", "speed_mps", "gamma0"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ScenarioError(f"{name} must be positive, got {value}")
        for name in ("bob_xy", "eve_xy", "start_xy", "end_xy"):
            object.__setattr__(self, name, _as_point(getattr(self, name), name))

        required = _distance(self.start_xy, self.end_xy)
        reachable = self.n_slots * self.slot_len * self.speed_mps
        if required > reachable + TRAJECTORY_SLACK_M:
            raise ScenarioError(
                f"infeasible scenario: start→end distance {required:.3f} m exceeds "
                f"the reachable {reachable:.3f} m within T={self.horizon_s} s"
            )

    @property
    def slot_len(self) -> float:
        """δ_t = T / N"""
        return self.horizon_s / self.n_slots


@dataclass(frozen=True, eq=False)
class Trajectory:
    """고정 고도 H에서의 N개 수평 경유점"""

    waypoints: np.ndarray

    def __post_init__(self):
        points = np.array(self.waypoints, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 1:
            raise ScenarioError(f"waypoints must have shape (N, 2), got {points.shape}")
        if not np.all(np.isfinite(points)):
            raise ScenarioError("waypoints must be finite")
        points.setflags(write=False)
        object.__setattr__(self, "waypoints", points)

    def __len__(self) -> int:
        return self.waypoints.shape[0]

    def path_length(self, start_xy: ArrayLike, end_xy: Optional[ArrayLike] = None) -> float:
        """start → w[1] → ... → w[N] (→ end) 꺾은선 길이"""
        chain = [np.asarray(start_xy, dtype=float)[None, :], self.waypoints]
        if end_xy is not None:
            chain.append(np.asarray(end_xy, dtype=float)[None, :])
        points = np.vstack(chain)
        return float(np.linalg.norm(np.diff(points, axis=0), axis=1).sum())

    def min_distance_to(self, point: ArrayLike) -> float:
        """지상 점까지의 최소 수평 거리"""
        offsets = self.waypoints - np.asarray(point, dtype=float)
        return float(np.linalg.norm(offsets, axis=1).min())


@dataclass(frozen=True)
class Violation:
    """제약 위반 보고 (slot은 1부터 시작, 전체 합 제약은 None)"""

    constraint: str
    slot: Optional[int]
    excess: float


def db_to_linear(db: float) -> float:
    """dB → 선형 배율"""
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    """dBm → W"""
    return 10.0 ** ((dbm - 30.0) / 10.0)


def _distance(p: ArrayLike, q: ArrayLike) -> float:
    return float(np.linalg.norm(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)))


def channel_gain(uav_xy: ArrayLike, ground_xy: ArrayLike, cfg: ScenarioConfig):
    """
    정규화 채널 이득 h = γ0 / (‖uav − ground‖² + H²)

    uav_xy가 (N, 2) 배열이면 슬롯별 이득 배열을 반환
    """
    offsets = np.asarray(uav_xy, dtype=float) - np.asarray(ground_xy, dtype=float)
    squared = np.sum(offsets * offsets, axis=-1) + cfg.altitude_m**2
    gain = cfg.gamma0 / squared
    if np.ndim(gain) == 0:
        return float(gain)
    return gain


def max_displacement(cfg: ScenarioConfig) -> float:
    """슬롯당 최대 이동 거리 d̄ = V̄·T/N"""
    return cfg.speed_mps * cfg.horizon_s / cfg.n_slots


def validate_trajectory(traj: Trajectory, cfg: ScenarioConfig) -> List[Violation]:
    """시작, 슬롯 간, 끝 이동 거리 검사. 빈 리스트면 실현 가능"""
    if len(traj) != cfg.n_slots:
        raise ScenarioError(
            f"trajectory has {len(traj)} waypoints, scenario expects {cfg.n_slots}"
        )

    limit = max_displacement(cfg)
    chain = np.vstack([np.asarray(cfg.start_xy)[None, :], traj.waypoints, np.asarray(cfg.end_xy)[None, :]])
    hops = np.linalg.norm(np.diff(chain, axis=0), axis=1)

    violations = []
    for index, hop in enumerate(hops):
        excess = hop - limit
        if excess <= TRAJECTORY_SLACK_M:
            continue
        if index == 0:
            violations.append(Violation("start_hop", 1, float(excess)))
        elif index == len(hops) - 1:
            violations.append(Violation("end_hop", cfg.n_slots, float(excess)))
        else:
            violations.append(Violation("hop", index, float(excess)))
    return violations


def baseline_pivot(cfg: ScenarioConfig) -> Tuple[np.ndarray, bool]:
    """
    기준 궤적의 꺾임점 계산

    Returns:
        (pivot, hovers): Bob 상공에서 호버링할 수 있으면 (bob_xy, True),
        아니면 start→bob 선분 위의 회전점 u와 False
    """
    start = np.asarray(cfg.start_xy)
    bob = np.asarray(cfg.bob_xy)
    end = np.asarray(cfg.end_xy)
    budget = cfg.n_slots * max_displacement(cfg)

    inbound = _distance(start, bob)
    if inbound + _distance(bob, end) <= budget:
        return bob.copy(), True

    # h(t) = ‖start→u(t)‖ + ‖u(t)→end‖ 는 t에 대해 비감소
    def detour(t: float) -> float:
        return t * inbound + _distance(start + t * (bob - start), end)

    lo, hi = 0.0, 1.0
    for _ in range(MAX_BISECTION_STEPS):
        if budget - detour(lo) <= cfg.solver.bisection_tol or hi - lo <= np.finfo(float).eps:
            break
        mid = 0.5 * (lo + hi)
        if detour(mid) <= budget:
            lo = mid
        else:
            hi = mid

    return start + lo * (bob - start), False


def baseline_trajectory(cfg: ScenarioConfig) -> Trajectory:
    """
    best-effort 기준 궤적 생성

    최고 속도로 Bob을 향해 비행하고, 가능한 한 오래 Bob 상공에서 호버링한 뒤
    최고 속도로 도착점에 간다. 시간이 부족하면 Bob으로 가는 도중 회전점에서
    도착점으로 방향을 튼다. 마지막 접근 슬롯이 남는 거리를 흡수한다.
    """
    start = np.asarray(cfg.start_xy)
    end = np.asarray(cfg.end_xy)
    pivot, hovers = baseline_pivot(cfg)
    step = max_displacement(cfg)
    n = cfg.n_slots

    inbound = _distance(start, pivot)
    outbound = _distance(pivot, end)
    total = inbound + outbound

    # 호 길이 일정: 도착 전에는 최고 속도, 출발 후에는 도착점까지 최고 속도
    slots = np.arange(1, n + 1, dtype=float)
    arrive = np.minimum(slots * step, inbound)
    depart = total - (n - slots) * step
    arc = np.clip(np.maximum(arrive, depart), 0.0, total)

    waypoints = np.empty((n, 2))
    on_inbound = arc <= inbound
    if inbound > 0:
        waypoints[on_inbound] = start + (arc[on_inbound, None] / inbound) * (pivot - start)
    else:
        waypoints[on_inbound] = start
    if outbound > 0:
        waypoints[~on_inbound] = pivot + ((arc[~on_inbound, None] - inbound) / outbound) * (end - pivot)
    else:
        waypoints[~on_inbound] = pivot

    hovering = (slots * step >= inbound) & (depart <= inbound)
    waypoints[hovering] = pivot
    waypoints[-1] = end

    traj = Trajectory(waypoints)
    logger.debug(
        "baseline trajectory: %s, %d hover slots",
        "fly-hover-fly" if hovers else "midpoint turn",
        int(hovering.sum()),
    )
    return traj
