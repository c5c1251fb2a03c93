# bcd_driver.py - 블록 좌표 하강(BCD) 외부 루프와 비교 기법들

import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Tuple

import numpy as np

from .constants import RATIO_FLOOR
from .errors import ScenarioError, SolverError
from .scenario import ScenarioConfig, SolverTolerances, Trajectory, baseline_trajectory, validate_trajectory
from .secrecy_model import AllocationLimits, PowerAllocation, average_secrecy_rate, validate_allocation
from .solvers import SolverState, solve_alice_power, solve_alpha, solve_bob_power, solve_trajectory

logger = logging.getLogger(__name__)


class SchemeKind(str, Enum):
    """최적화 기법: 제안 기법(JTDORA)과 비교 기법들"""

    JTDORA = "JTDORA"
    ANOPC = "ANOPC"
    ANTD = "ANTD"
    ANERA = "ANERA"
    TDPC = "TDPC"

    @classmethod
    def parse(cls, name: str) -> "SchemeKind":
        """대소문자 구분 없이 기법 이름 해석"""
        try:
            return cls(str(name).strip().upper())
        except ValueError:
            valid = ", ".join(kind.value for kind in cls)
            raise ScenarioError(f"unknown scheme '{name}' (valid: {valid})") from None


BLOCK_ORDER = ("alice_power", "bob_power", "an_split", "trajectory")

SCHEME_BLOCKS: Dict[SchemeKind, Tuple[str, ...]] = {
    SchemeKind.JTDORA: BLOCK_ORDER,
    SchemeKind.ANOPC: ("alice_power", "bob_power"),
    SchemeKind.ANTD: ("trajectory",),
    SchemeKind.ANERA: (),
    SchemeKind.TDPC: ("alice_power", "trajectory"),
}


@dataclass(frozen=True, eq=False)
class SolveReport:
    """한 번의 풀이 결과"""

    scheme: SchemeKind
    asr_trace: Tuple[float, ...]
    final_trajectory: Trajectory
    final_alloc: PowerAllocation
    iterations: int
    converged: bool
    wall_time_s: float
    null_steps: int = 0
    termination: str = "converged"

    @property
    def final_asr(self) -> float:
        return self.asr_trace[-1]


def _update_alice(state: SolverState) -> SolverState:
    return state.with_alloc(p_a=solve_alice_power(state))


def _update_bob(state: SolverState) -> SolverState:
    return state.with_alloc(p_b=solve_bob_power(state))


def _update_alpha(state: SolverState) -> SolverState:
    return state.with_alloc(alpha=solve_alpha(state))


def _update_trajectory(state: SolverState) -> SolverState:
    result = solve_trajectory(state)
    if not result.accepted:
        return state
    return state.with_trajectory(result.trajectory)


BLOCK_UPDATES: Dict[str, Callable[[SolverState], SolverState]] = {
    "alice_power": _update_alice,
    "bob_power": _update_bob,
    "an_split": _update_alpha,
    "trajectory": _update_trajectory,
}


def allocation_limits(cfg: ScenarioConfig, scheme: SchemeKind = SchemeKind.JTDORA) -> AllocationLimits:
    """기법별 전력 한도 (TDPC는 AN 없이 전체 예산을 Alice에게)"""
    if scheme is SchemeKind.TDPC:
        return AllocationLimits.without_an(cfg)
    return AllocationLimits.from_config(cfg)


def initial_point(cfg: ScenarioConfig, scheme: SchemeKind = SchemeKind.JTDORA) -> Tuple[Trajectory, PowerAllocation]:
    """
    기준 궤적 + 상수 전력 할당

    기본은 P_a = P̄_a, P_b = P̄_b, α = ᾱ. TDPC는 α = 1, P_b = 0, P_a = P_ave.
    """
    traj = baseline_trajectory(cfg)
    budgets = cfg.budgets
    if scheme is SchemeKind.TDPC:
        alloc = PowerAllocation.constant(cfg.n_slots, budgets.p_ave_w, 0.0, 1.0)
    else:
        alloc = PowerAllocation.constant(cfg.n_slots, budgets.p_bar_a, budgets.p_bar_b, budgets.alpha_bar)
    return traj, alloc


def _check_feasible(state: SolverState, block: str) -> None:
    violations = validate_trajectory(state.trajectory, state.cfg)
    violations += validate_allocation(state.alloc, state.cfg, state.limits)
    if violations:
        raise SolverError(f"{block} update left the iterate infeasible: {violations[0]}")


def bcd_solve(cfg: ScenarioConfig, scheme: SchemeKind = SchemeKind.JTDORA) -> SolveReport:
    """
    외부 BCD 루프

    Alice 전력 → Bob 전력 → α → 궤적 순서로, 기법이 고정하지 않은 블록만 갱신한다.
    각 블록 뒤에 정확한 ASR을 다시 계산해 줄어드는 갱신은 버린다.
    ASR의 상대 증가가 ε 미만이거나 반복 상한에 도달하면 멈춘다.
    """
    scheme = SchemeKind.parse(scheme) if not isinstance(scheme, SchemeKind) else scheme
    started = time.perf_counter()
    solver = cfg.solver

    traj, alloc = initial_point(cfg, scheme)
    state = SolverState(cfg=cfg, trajectory=traj, alloc=alloc, limits=allocation_limits(cfg, scheme))
    asr = average_secrecy_rate(state.trajectory, state.alloc, cfg)
    trace: List[float] = [asr]
    blocks = SCHEME_BLOCKS[scheme]

    if not blocks:
        return SolveReport(
            scheme=scheme,
            asr_trace=tuple(trace),
            final_trajectory=state.trajectory,
            final_alloc=state.alloc,
            iterations=0,
            converged=True,
            wall_time_s=time.perf_counter() - started,
            termination="no_iteration",
        )

    null_steps = 0
    converged = False
    iterations = 0
    for iterations in range(1, solver.max_outer_iters + 1):
        for block in blocks:
            candidate = BLOCK_UPDATES[block](state)
            _check_feasible(candidate, block)
            candidate_asr = average_secrecy_rate(candidate.trajectory, candidate.alloc, cfg)
            if candidate_asr >= asr:
                state, asr = candidate, candidate_asr
            else:
                null_steps += 1
                logger.debug("%s: rejected %s update (ASR %.9f < %.9f)", scheme.value, block, candidate_asr, asr)

        trace.append(asr)
        gain = (trace[-1] - trace[-2]) / max(trace[-2], RATIO_FLOOR)
        logger.debug("%s iteration %d: ASR %.9f bps/Hz (gain %.3e)", scheme.value, iterations, asr, gain)
        if gain < solver.epsilon:
            converged = True
            break

    wall_time = time.perf_counter() - started
    logger.info(
        "%s: ASR %.6f bps/Hz after %d iterations in %.2f s%s",
        scheme.value,
        asr,
        iterations,
        wall_time,
        "" if converged else " (iteration cap reached)",
    )
    return SolveReport(
        scheme=scheme,
        asr_trace=tuple(trace),
        final_trajectory=state.trajectory,
        final_alloc=state.alloc,
        iterations=iterations,
        converged=converged,
        wall_time_s=wall_time,
        null_steps=null_steps,
        termination="converged" if converged else "max_iters",
    )


def complexity_estimate(n_slots: int, iterations: int, tolerances: SolverTolerances) -> Dict[str, float]:
    """
    블록별 연산량 추정 (보고용)

    Args:
        n_slots: 슬롯 수 N
        iterations: 외부 반복 수
        tolerances: 이분 탐색 단계 수 계산에 사용

    Returns:
        블록 이름 → 추정 연산 수
    """
    bisection_steps = float(np.ceil(np.log2(1.0 / tolerances.bisection_tol)))
    golden_steps = float(np.ceil(np.log(tolerances.inner_tol) / np.log((np.sqrt(5.0) - 1.0) / 2.0)))
    per_iteration = {
        "alice_power": n_slots * bisection_steps,
        "bob_power": n_slots * bisection_steps,
        "an_split": n_slots * golden_steps,
        # SLSQP의 최소제곱 부분문제는 변수 2N에 대해 세제곱
        "trajectory": tolerances.traj_max_iters * float(2 * n_slots) ** 3,
    }
    estimate = {name: iterations * ops for name, ops in per_iteration.items()}
    estimate["total"] = sum(estimate.values())
    return estimate
