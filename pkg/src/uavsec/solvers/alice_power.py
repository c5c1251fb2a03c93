# alice_power.py - Alice 송신 전력 부분문제 (SCA 대리 문제 + 쌍대 분해)

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..constants import DEFAULT_ALPHA_CLAMP
from ..errors import ScenarioError, SolverError
from ..secrecy_model import SlotLink
from .dual import bisect_multiplier
from .state import SolverState

logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class AliceSlotCoeffs:
    """
    슬롯별 계수: 목적함수 ln(1 + a·p/(p+b)) − ln(1 + c·p/(p+d))

    a_lin은 Eve 항을 이전 반복점에서 선형화한 기울기 A_n
    """

    a: Real
    b: Real
    c: Real
    d: Real
    a_lin: Real


def clamp_alpha(alpha: Real, alpha_clamp: float) -> np.ndarray:
    """α를 [clamp, 1−clamp]로 제한. [0, 1] 밖이면 오류"""
    values = np.asarray(alpha, dtype=float)
    if np.any(values < 0) or np.any(values > 1):
        raise ScenarioError("alpha must lie in [0, 1]")
    return np.clip(values, alpha_clamp, 1.0 - alpha_clamp)


def p1_coefficients(
    alpha: Real, p_b: Real, link: SlotLink, alpha_clamp: float = DEFAULT_ALPHA_CLAMP
) -> Tuple[Real, Real, Real, Real]:
    """Alice 전력 부분문제의 (a, b, c, d) 계수"""
    al = clamp_alpha(alpha, alpha_clamp)
    h_ab = np.asarray(link.h_ab, dtype=float)
    h_ae = np.asarray(link.h_ae, dtype=float)
    p_b = np.asarray(p_b, dtype=float)

    ratio = al / (1.0 - al)
    a = ratio * (1.0 + p_b * h_ab)
    b = (p_b * h_ab + 1.0) / ((1.0 - al) * h_ab)
    c = ratio
    d = 1.0 / ((1.0 - al) * h_ae)

    # 두 항 모두 f(x) = ln(1 + (a'x+b')/(c'x+d')) 꼴에서 a'd' − b'c' ≥ 0 이어야 선형화가 과대추정
    coeffs = np.stack(np.broadcast_arrays(a, b, c, d))
    if not (np.all(np.isfinite(coeffs)) and np.all(coeffs > 0)):
        raise SolverError("Alice power coefficients must be positive and finite")

    if np.ndim(a) == 0:
        return float(a), float(b), float(c), float(d)
    return a, b, c, d


def eve_term_linear_coeff(p_a_prev: Real, c: Real, d: Real) -> Real:
    """ln(1 + c·p/(p+d))의 p_a_prev에서의 도함수"""
    p = np.asarray(p_a_prev, dtype=float)
    slope = c * d / ((p + d) * (d + (c + 1.0) * p))
    if np.ndim(slope) == 0:
        return float(slope)
    return slope


def slot_alice_power_given_dual(coeffs: AliceSlotCoeffs, mu: float, p_hat: float) -> Real:
    """
    승수 μ에서 슬롯별 최적 전력

    ln(1 + a·p/(p+b)) − (A+μ)·p 의 [0, p_hat] 위 최대점. 정류 조건
    a·b / (((1+a)p + b)(p + b)) = A+μ 는 p에 대한 2차식이 된다.
    """
    a = np.asarray(coeffs.a, dtype=float)
    b = np.asarray(coeffs.b, dtype=float)
    price = np.asarray(coeffs.a_lin, dtype=float) + mu

    with np.errstate(divide="ignore", invalid="ignore"):
        qa = 1.0 + a
        qb = b * (2.0 + a)
        qc = b * b - a * b / price
        disc = np.maximum(qb * qb - 4.0 * qa * qc, 0.0)
        # qc < 0 이면 양의 근 하나: 소거 오차를 피하는 형태로 계산
        root = -2.0 * qc / (qb + np.sqrt(disc))

    power = np.where(price * b >= a, 0.0, np.clip(root, 0.0, p_hat))
    power = np.where(price <= 0, p_hat, power)
    if np.ndim(power) == 0:
        return float(power)
    return power


def p1_terms(p_a: Real, coeffs: AliceSlotCoeffs) -> np.ndarray:
    """슬롯별 ln(1 + a·p/(p+b)) − ln(1 + c·p/(p+d))"""
    p = np.asarray(p_a, dtype=float)
    gain = np.log1p(coeffs.a * p / (p + coeffs.b))
    leak = np.log1p(coeffs.c * p / (p + coeffs.d))
    return gain - leak


def p1_objective(p_a: Real, coeffs: AliceSlotCoeffs) -> float:
    """원래 목적함수 Σ ln(1 + a·p/(p+b)) − ln(1 + c·p/(p+d))"""
    return float(np.sum(p1_terms(p_a, coeffs)))


def p2_terms(p_a: Real, coeffs: AliceSlotCoeffs, p_a_prev: Real) -> np.ndarray:
    p = np.asarray(p_a, dtype=float)
    p0 = np.asarray(p_a_prev, dtype=float)
    gain = np.log1p(coeffs.a * p / (p + coeffs.b))
    leak = np.log1p(coeffs.c * p0 / (p0 + coeffs.d)) + coeffs.a_lin * (p - p0)
    return gain - leak


def p2_objective(p_a: Real, coeffs: AliceSlotCoeffs, p_a_prev: Real) -> float:
    """Eve 항을 p_a_prev에서 선형화한 대리 목적함수 (원래 목적함수의 하한)"""
    return float(np.sum(p2_terms(p_a, coeffs, p_a_prev)))


def alice_coefficients(state: SolverState) -> AliceSlotCoeffs:
    """현재 상태에서 슬롯별 계수와 선형화 기울기"""
    a, b, c, d = p1_coefficients(
        state.alloc.alpha, state.alloc.p_b, state.link, state.cfg.solver.alpha_clamp
    )
    return AliceSlotCoeffs(a=a, b=b, c=c, d=d, a_lin=eve_term_linear_coeff(state.alloc.p_a, c, d))


def solve_alice_power(state: SolverState) -> np.ndarray:
    """
    Alice 전력 블록 갱신

    μ=0 해가 평균 전력 예산을 만족하면 그대로 쓰고, 아니면 μ를 이분 탐색한다.
    """
    coeffs = alice_coefficients(state)
    n = state.cfg.n_slots
    p_hat = state.limits.p_hat_a
    budget = n * state.limits.p_bar_a

    unconstrained = np.broadcast_to(slot_alice_power_given_dual(coeffs, 0.0, p_hat), (n,))
    if unconstrained.sum() <= budget:
        logger.debug("Alice power: budget slack (%.3e of %.3e)", unconstrained.sum(), budget)
        return np.array(unconstrained, dtype=float)

    mu, power = bisect_multiplier(
        lambda m: np.broadcast_to(slot_alice_power_given_dual(coeffs, m, p_hat), (n,)),
        budget,
        n * state.cfg.solver.bisection_tol,
        lower=0.0,
    )
    logger.debug("Alice power: μ=%.6e", mu)
    return np.array(power, dtype=float)
