# trajectory_opt.py - 궤적 부분문제: 슬랙 제거 SCA 대리 함수와 SLSQP 최대화

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize, nnls

from ..constants import DOMAIN_GUARD_RATIO, KKT_ACTIVE_MARGIN, RATIO_FLOOR
from ..errors import DomainGuardTriggered, ScenarioError
from ..scenario import ScenarioConfig, Trajectory, max_displacement, validate_trajectory
from .alice_power import clamp_alpha
from .state import SolverState

logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]

REPAIR_SWEEPS = 50


@dataclass(frozen=True, eq=False)
class EveLinearization:
    """Eve까지 제곱 거리의 아핀 하한 v_lb(w) = gradient·w + offset"""

    gradient: np.ndarray
    offset: Real

    def __call__(self, waypoints: np.ndarray) -> Real:
        value = np.sum(self.gradient * np.asarray(waypoints, dtype=float), axis=-1) + self.offset
        if np.ndim(value) == 0:
            return float(value)
        return value


@dataclass(frozen=True, eq=False)
class TrajSlotCoeffs:
    """
    슬롯별 궤적 부분문제 계수

    Bob 항은 ln(c0 + c1/s), AN이 없는 슬롯(bob_exact)은 정확한 ln(1 + c2/(c3 + s))를 쓴다.
    둘 다 s에 대해 볼록이라 s_prev에서의 접선 b_lin이 하한이 된다.
    """

    c0: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    b_lin: np.ndarray
    s_prev: np.ndarray
    eve_lin: EveLinearization
    active: np.ndarray
    bob_exact: np.ndarray
    bob_xy: np.ndarray
    altitude_m: float

    def __len__(self) -> int:
        return self.c0.size

    def bob_distance(self, waypoints: np.ndarray) -> np.ndarray:
        """s(w) = ‖w − bob‖² + H²"""
        offsets = np.asarray(waypoints, dtype=float) - self.bob_xy
        return np.sum(offsets * offsets, axis=-1) + self.altitude_m**2

    def bob_term(self, s: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            exact = np.log1p(self.c2 / (self.c3 + s))
            approx = np.log(self.c0 + self.c1 / s)
        return np.where(self.active, np.where(self.bob_exact, exact, approx), 0.0)


@dataclass(frozen=True, eq=False)
class TrajectoryResult:
    """
    궤적 블록 결과: 궤적, 등식 슬랙 s와 v, 대리 함수 값

    converged는 SLSQP의 성공 여부, kkt_residual은 반환된 궤적에서의
    상대 정류 조건 잔차 (실현 가능 궤적이 하나뿐이면 0)
    """

    trajectory: Trajectory
    s: np.ndarray
    v: np.ndarray
    surrogate_value: float
    accepted: bool
    iterations: int
    message: str
    converged: bool = True
    kkt_residual: float = 0.0


def p5_coefficients(alpha: Real, p_a: Real, p_b: Real, cfg: ScenarioConfig) -> Tuple[np.ndarray, ...]:
    """
    궤적 부분문제 계수 (c0, c1, c2, c3)

    P_a = P_b = 0 인 슬롯은 모든 계수가 0이며 목적함수에서 빠진다.
    """
    al = clamp_alpha(alpha, cfg.solver.alpha_clamp)
    p_a = np.asarray(p_a, dtype=float)
    p_b = np.asarray(p_b, dtype=float)
    gamma0 = cfg.gamma0

    mix = p_b + p_a * (1.0 - al)
    with np.errstate(divide="ignore", invalid="ignore"):
        c0 = np.where(mix > 0, al * p_a / mix, 0.0)
        c1 = np.where(mix > 0, al * p_a * p_b * gamma0 / mix, 0.0)
    c2 = al * p_a * gamma0
    c3 = (1.0 - al) * p_a * gamma0
    return tuple(np.atleast_1d(np.asarray(v, dtype=float)) for v in np.broadcast_arrays(c0, c1, c2, c3))


def bob_term_linear_coeff(s_prev: Real, c0: Real, c1: Real) -> Real:
    """ln(c0 + c1/s)의 s_prev에서의 도함수 B = −c1/(s_prev·(c0·s_prev + c1))"""
    s_prev = np.asarray(s_prev, dtype=float)
    c0 = np.asarray(c0, dtype=float)
    c1 = np.asarray(c1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(c1 > 0, -c1 / (s_prev * (c0 * s_prev + c1)), 0.0)
    if np.ndim(slope) == 0:
        return float(slope)
    return slope


def _exact_bob_slope(s_prev: np.ndarray, c2: np.ndarray, c3: np.ndarray) -> np.ndarray:
    return np.where(c2 > 0, -c2 / ((c3 + s_prev) * (c2 + c3 + s_prev)), 0.0)


def eve_distance_linearization(w_prev, eve_xy, cfg: ScenarioConfig) -> EveLinearization:
    """
    ‖w − eve‖² + H² 의 w_prev에서의 1차 하한

    제곱 거리는 볼록이므로 접평면이 전역 하한이며 w_prev에서 등호가 성립한다.
    w_prev가 (N, 2) 배열이면 슬롯별 선형화를 한 번에 만든다.
    """
    w_prev = np.asarray(w_prev, dtype=float)
    eve = np.asarray(eve_xy, dtype=float)
    gradient = 2.0 * (w_prev - eve)
    offset = -np.sum(w_prev * w_prev, axis=-1) + float(eve @ eve) + cfg.altitude_m**2
    return EveLinearization(gradient=gradient, offset=offset)


def trajectory_coefficients(
    c0: np.ndarray,
    c1: np.ndarray,
    c2: np.ndarray,
    c3: np.ndarray,
    expansion: Trajectory,
    cfg: ScenarioConfig,
    bob_exact: Optional[np.ndarray] = None,
) -> TrajSlotCoeffs:
    """확장점 궤적에서 선형화 계수를 묶어 TrajSlotCoeffs 생성"""
    n = len(expansion)
    c0, c1, c2, c3 = (np.broadcast_to(np.asarray(v, dtype=float), (n,)).copy() for v in (c0, c1, c2, c3))
    bob_exact = np.zeros(n, dtype=bool) if bob_exact is None else np.broadcast_to(bob_exact, (n,)).copy()

    bob = np.asarray(cfg.bob_xy, dtype=float)
    offsets = expansion.waypoints - bob
    s_prev = np.sum(offsets * offsets, axis=1) + cfg.altitude_m**2
    slope = np.where(bob_exact, _exact_bob_slope(s_prev, c2, c3), bob_term_linear_coeff(s_prev, c0, c1))

    return TrajSlotCoeffs(
        c0=c0,
        c1=c1,
        c2=c2,
        c3=c3,
        b_lin=slope,
        s_prev=s_prev,
        eve_lin=eve_distance_linearization(expansion.waypoints, cfg.eve_xy, cfg),
        active=(c1 > 0) | (c2 > 0),
        bob_exact=bob_exact,
        bob_xy=bob,
        altitude_m=cfg.altitude_m,
    )


def _eve_term(v: np.ndarray, coeffs: TrajSlotCoeffs) -> np.ndarray:
    """−ln(1 + c2/(c3 + v)), v에 대해 오목 증가"""
    with np.errstate(divide="ignore", invalid="ignore"):
        value = -np.log1p(coeffs.c2 / (coeffs.c3 + v))
    return np.where(coeffs.active & (coeffs.c2 > 0), value, 0.0)


def _offset_terms(coeffs: TrajSlotCoeffs) -> np.ndarray:
    constant = coeffs.bob_term(coeffs.s_prev) - coeffs.b_lin * coeffs.s_prev
    return np.where(coeffs.active, constant, 0.0)


def surrogate_offset(coeffs: TrajSlotCoeffs) -> float:
    """대리 함수를 원래 목적함수의 하한으로 만드는 상수 Σ f_bob(s_prev) − B·s_prev"""
    return float(np.sum(_offset_terms(coeffs)))


def surrogate_terms(waypoints: np.ndarray, coeffs: TrajSlotCoeffs, include_offset: bool = False) -> np.ndarray:
    """
    슬롯별 대리 함수 값 B_n·s(w[n]) − ln(1 + c2/(c3 + v_lb(w[n])))

    waypoints는 (..., N, 2) 배열이며 앞쪽 축은 여러 궤적을 한 번에 평가할 때 쓴다.

    Raises:
        DomainGuardTriggered: c3 + v_lb(w) ≤ 10⁻⁶·c3 인 활성 슬롯이 있음
    """
    waypoints = np.asarray(waypoints, dtype=float)
    v = coeffs.eve_lin(waypoints)
    guarded = coeffs.active & (coeffs.c2 > 0)
    floor = np.maximum(DOMAIN_GUARD_RATIO * coeffs.c3, 0.0)
    if np.any(guarded & (coeffs.c3 + v <= floor)):
        raise DomainGuardTriggered("linearized Eve distance fell below the domain guard")

    terms = np.where(coeffs.active, coeffs.b_lin * coeffs.bob_distance(waypoints), 0.0) + _eve_term(v, coeffs)
    if include_offset:
        terms = terms + _offset_terms(coeffs)
    return terms


def surrogate_objective(traj: Trajectory, coeffs: TrajSlotCoeffs, include_offset: bool = False) -> float:
    """Σ B_n·s(w[n]) − ln(1 + c2/(c3 + v_lb(w[n])))"""
    if len(traj) != len(coeffs):
        raise ScenarioError(f"trajectory has {len(traj)} waypoints, coefficients cover {len(coeffs)}")
    return float(np.sum(surrogate_terms(traj.waypoints, coeffs, include_offset)))


def p5_terms(waypoints: np.ndarray, coeffs: TrajSlotCoeffs, eve_xy) -> np.ndarray:
    """슬롯별 f_bob(s) − ln(1 + c2/(c3 + v)), waypoints는 (..., N, 2)"""
    waypoints = np.asarray(waypoints, dtype=float)
    offsets = waypoints - np.asarray(eve_xy, dtype=float)
    v = np.sum(offsets * offsets, axis=-1) + coeffs.altitude_m**2
    return coeffs.bob_term(coeffs.bob_distance(waypoints)) + _eve_term(v, coeffs)


def p5_objective(traj: Trajectory, coeffs: TrajSlotCoeffs, eve_xy) -> float:
    """슬랙을 등식 값으로 둔 궤적 목적함수 Σ f_bob(s) − ln(1 + c2/(c3 + v))"""
    return float(np.sum(p5_terms(traj.waypoints, coeffs, eve_xy)))


def _surrogate_with_gradient(waypoints: np.ndarray, coeffs: TrajSlotCoeffs) -> Tuple[float, np.ndarray]:
    """SLSQP용: 가드 아래 영역은 잘라서 유한한 값과 기울기 반환"""
    v = coeffs.eve_lin(waypoints)
    shifted = np.maximum(coeffs.c3 + v, np.maximum(DOMAIN_GUARD_RATIO * coeffs.c3, 1e-300))
    eve_on = coeffs.active & (coeffs.c2 > 0)
    eve_value = np.where(eve_on, np.log(shifted) - np.log(shifted + coeffs.c2), 0.0)
    eve_slope = np.where(eve_on, coeffs.c2 / (shifted * (shifted + coeffs.c2)), 0.0)

    b = np.where(coeffs.active, coeffs.b_lin, 0.0)
    value = np.sum(b * coeffs.bob_distance(waypoints) + eve_value)
    gradient = 2.0 * b[:, None] * (waypoints - coeffs.bob_xy) + eve_slope[:, None] * coeffs.eve_lin.gradient
    return float(value), gradient


def _project_chain(points: np.ndarray, cfg: ScenarioConfig, free: int) -> np.ndarray:
    """앞뒤로 번갈아 이웃 경유점의 반경 d̄ 공 위로 투영"""
    limit = max_displacement(cfg)
    start = np.asarray(cfg.start_xy, dtype=float)
    end = np.asarray(cfg.end_xy, dtype=float)
    pts = points.copy()

    for _ in range(REPAIR_SWEEPS):
        if not validate_trajectory(Trajectory(pts), cfg):
            break
        anchor = start
        for i in range(free):
            gap = pts[i] - anchor
            dist = np.linalg.norm(gap)
            if dist > limit:
                pts[i] = anchor + gap * (limit / dist)
            anchor = pts[i]
        anchor = end
        for i in reversed(range(free)):
            gap = pts[i] - anchor
            dist = np.linalg.norm(gap)
            if dist > limit:
                pts[i] = anchor + gap * (limit / dist)
            anchor = pts[i]
    return pts


def _result(
    traj: Trajectory,
    coeffs: TrajSlotCoeffs,
    value: float,
    accepted: bool,
    iterations: int,
    message: str,
    converged: bool = True,
    kkt_residual: float = 0.0,
) -> TrajectoryResult:
    return TrajectoryResult(
        trajectory=traj,
        s=coeffs.bob_distance(traj.waypoints),
        v=np.asarray(coeffs.eve_lin(traj.waypoints), dtype=float),
        surrogate_value=value,
        accepted=accepted,
        iterations=iterations,
        message=message,
        converged=converged,
        kkt_residual=kkt_residual,
    )


def stationarity_residual(gradient: np.ndarray, margins: np.ndarray, margin_jac: np.ndarray) -> float:
    """
    min f s.t. g ≥ 0 의 상대 정류 조건 잔차 ‖∇f − Jᵀλ‖∞ / ‖∇f‖∞

    λ ≥ 0 은 활성 제약(g ≤ KKT_ACTIVE_MARGIN)에 대한 비음 최소제곱 해.
    """
    scale = float(np.max(np.abs(gradient), initial=0.0))
    if scale <= RATIO_FLOOR:
        return 0.0
    active = margins <= KKT_ACTIVE_MARGIN
    if not np.any(active):
        return 1.0
    normals = margin_jac[active].T
    multipliers, _ = nnls(normals, gradient)
    return float(np.max(np.abs(gradient - normals @ multipliers))) / scale


def maximize_surrogate(initial: Trajectory, coeffs: TrajSlotCoeffs, cfg: ScenarioConfig) -> TrajectoryResult:
    """
    이동 거리 제약 아래에서 대리 함수를 최대화

    제약은 이웃 경유점 사이 제곱 거리 r² − ‖Δ‖² ≥ 0 으로 두고 변수는 d̄로 정규화한다.
    결과가 실현 불가능하거나 도메인 가드에 걸리거나 대리 함수 값이 줄면
    입력 궤적을 그대로 돌려준다 (null step). 어느 경우든 반환 궤적에서의
    정류 조건 잔차를 함께 보고한다.
    """
    n = cfg.n_slots
    limit = max_displacement(cfg)
    start = np.asarray(cfg.start_xy, dtype=float)
    end = np.asarray(cfg.end_xy, dtype=float)
    pinned = cfg.pin_final_waypoint
    free = n - 1 if pinned else n
    hops = free + 1

    base_value = surrogate_objective(initial, coeffs)
    slack = hops * limit - float(np.linalg.norm(end - start))
    if free == 0:
        return _result(initial, coeffs, base_value, False, 0, "no free waypoints")
    if slack <= 1e-9 * max(1.0, hops * limit):
        return _result(initial, coeffs, base_value, False, 0, "single feasible trajectory")

    radius = (limit - min(1e-7 * limit, slack / (4.0 * hops))) / limit
    head = start / limit
    tail = end / limit

    def full_waypoints(x: np.ndarray) -> np.ndarray:
        points = x.reshape(free, 2) * limit
        return np.vstack([points, end[None, :]]) if pinned else points

    def objective(x: np.ndarray) -> Tuple[float, np.ndarray]:
        value, gradient = _surrogate_with_gradient(full_waypoints(x), coeffs)
        return -value, -limit * gradient[:free].ravel()

    def links(x: np.ndarray) -> np.ndarray:
        return np.diff(np.vstack([head, x.reshape(free, 2), tail]), axis=0)

    def hop_margin(x: np.ndarray) -> np.ndarray:
        delta = links(x)
        return radius**2 - np.sum(delta * delta, axis=1)

    def hop_margin_jac(x: np.ndarray) -> np.ndarray:
        delta = links(x)
        jac = np.zeros((hops, free, 2))
        idx = np.arange(free)
        jac[idx, idx] = -2.0 * delta[:free]
        jac[idx + 1, idx] = 2.0 * delta[1:]
        return jac.reshape(hops, 2 * free)

    def residual_at(traj: Trajectory) -> float:
        x = traj.waypoints[:free].ravel() / limit
        return stationarity_residual(objective(x)[1], hop_margin(x), hop_margin_jac(x))

    def null_step(iterations: int, message: str, converged: bool) -> TrajectoryResult:
        return _result(initial, coeffs, base_value, False, iterations, message, converged, residual_at(initial))

    x0 = initial.waypoints[:free].ravel() / limit
    res = minimize(
        objective,
        x0,
        jac=True,
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": hop_margin, "jac": hop_margin_jac}],
        options={"ftol": cfg.solver.inner_tol, "maxiter": cfg.solver.traj_max_iters},
    )
    iterations = int(getattr(res, "nit", 0))
    converged = bool(res.success)
    if not np.all(np.isfinite(res.x)):
        return null_step(iterations, f"non-finite iterate: {res.message}", False)

    points = full_waypoints(res.x)
    if validate_trajectory(Trajectory(points), cfg):
        points = _project_chain(points, cfg, free)
    candidate = Trajectory(points)
    if validate_trajectory(candidate, cfg):
        logger.debug("trajectory: repair failed, keeping previous trajectory")
        return null_step(iterations, "repair failed", converged)

    try:
        value = surrogate_objective(candidate, coeffs)
    except DomainGuardTriggered:
        logger.debug("trajectory: domain guard triggered, keeping previous trajectory")
        return null_step(iterations, "domain guard", converged)

    if value < base_value:
        logger.debug("trajectory: surrogate decreased (%.6e < %.6e)", value, base_value)
        return null_step(iterations, "no ascent", converged)

    residual = residual_at(candidate)
    if not converged:
        logger.warning("trajectory: SLSQP stopped early (%s), KKT residual %.3e", res.message, residual)
    logger.debug(
        "trajectory: %d SLSQP iterations, surrogate %.6e → %.6e, KKT residual %.3e (%s)",
        iterations,
        base_value,
        value,
        residual,
        res.message,
    )
    return _result(candidate, coeffs, value, True, iterations, str(res.message), converged, residual)


def solve_trajectory(state: SolverState) -> TrajectoryResult:
    """궤적 블록 갱신: 현재 궤적에서 대리 함수를 만들고 최대화"""
    cfg = state.cfg
    violations = validate_trajectory(state.trajectory, cfg)
    if violations:
        raise ScenarioError(f"input trajectory violates mobility constraints: {violations[0]}")

    alloc = state.alloc
    c0, c1, c2, c3 = p5_coefficients(alloc.alpha, alloc.p_a, alloc.p_b, cfg)
    coeffs = trajectory_coefficients(c0, c1, c2, c3, state.trajectory, cfg, bob_exact=alloc.p_b <= 0)
    return maximize_surrogate(state.trajectory, coeffs, cfg)
