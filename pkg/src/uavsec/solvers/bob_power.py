# bob_power.py - Bob(AN) 송신 전력 부분문제: KKT 닫힌 형태 + 승수 이분 탐색

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..constants import LAMBDA_MIN
from ..secrecy_model import SlotLink
from .dual import bisect_multiplier
from .state import SolverState

logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class BobSlotCoeffs:
    """목적함수 ln(1 + (k0·p + k1)/(k2·p + k3))의 계수"""

    k0: Real
    k1: Real
    k2: Real
    k3: Real

    @property
    def margin(self) -> Real:
        """k0·k3 − k1·k2 (양수면 목적함수가 P_b에 대해 증가)"""
        return self.k0 * self.k3 - self.k1 * self.k2


def p3_coefficients(alpha: Real, p_a: Real, link: SlotLink) -> BobSlotCoeffs:
    alpha = np.asarray(alpha, dtype=float)
    p_a = np.asarray(p_a, dtype=float)
    h_ab = np.asarray(link.h_ab, dtype=float)
    k0, k1, k2, k3 = np.broadcast_arrays(
        alpha * p_a * h_ab * h_ab,
        alpha * p_a * h_ab,
        h_ab,
        (1.0 - alpha) * p_a * h_ab + 1.0,
    )
    if k0.ndim == 0:
        return BobSlotCoeffs(float(k0), float(k1), float(k2), float(k3))
    return BobSlotCoeffs(k0, k1, k2, k3)


def bob_power_root(k: BobSlotCoeffs, lam: float, p_hat: float) -> Real:
    """
    승수 λ에서 슬롯별 최적 Bob 전력

    정류 조건 (k2·p + k3)((k0+k2)p + k1 + k3) = (k0·k3 − k1·k2)/λ 의 양의 근을
    [0, p_hat]로 자른다.
    """
    k0, k1, k2, k3 = (np.asarray(v, dtype=float) for v in (k.k0, k.k1, k.k2, k.k3))
    a2 = k2 * (k0 + k2)
    a1 = k1 * k2 + 2.0 * k2 * k3 + k0 * k3
    a0 = k3 * (k1 + k3) - (k0 * k3 - k1 * k2) / lam

    with np.errstate(divide="ignore", invalid="ignore"):
        disc = np.maximum(a1 * a1 - 4.0 * a0 * a2, 0.0)
        root = -2.0 * a0 / (a1 + np.sqrt(disc))

    power = np.where((a0 >= 0) | (a2 <= 0), 0.0, np.clip(root, 0.0, p_hat))
    if np.ndim(power) == 0:
        return float(power)
    return power


def p3_objective(p_b: Real, k: BobSlotCoeffs) -> float:
    p = np.asarray(p_b, dtype=float)
    return float(np.sum(np.log1p((k.k0 * p + k.k1) / (k.k2 * p + k.k3))))


def solve_bob_power(state: SolverState) -> np.ndarray:
    """Bob 전력 블록 갱신: 최대 전력 해가 예산 안이면 그대로, 아니면 λ 이분 탐색"""
    k = p3_coefficients(state.alloc.alpha, state.alloc.p_a, state.link)
    n = state.cfg.n_slots
    p_hat = state.limits.p_hat_b
    budget = n * state.limits.p_bar_b

    def power_at(lam: float) -> np.ndarray:
        return np.broadcast_to(bob_power_root(k, lam, p_hat), (n,))

    peak = power_at(LAMBDA_MIN)
    if peak.sum() <= budget:
        logger.debug("Bob power: budget slack (%.3e of %.3e)", peak.sum(), budget)
        return np.array(peak, dtype=float)

    lam, power = bisect_multiplier(power_at, budget, n * state.cfg.solver.bisection_tol, lower=LAMBDA_MIN)
    logger.debug("Bob power: λ=%.6e", lam)
    return np.array(power, dtype=float)
