# secrecy_model.py - SINR, 슬롯별 비밀 전송률, 평균 비밀 전송률(ASR)

import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Union

import numpy as np

from .errors import ScenarioError
from .scenario import ScenarioConfig, Trajectory, Violation, channel_gain

logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]

# 평균 전력 제약의 상대 허용오차
_BUDGET_RTOL = 1e-9


def _readonly_vector(values, name: str) -> np.ndarray:
    vector = np.array(values, dtype=float)
    if vector.ndim != 1:
        raise ScenarioError(f"{name} must be a 1-D vector, got shape {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise ScenarioError(f"{name} must be finite")
    vector.setflags(write=False)
    return vector


@dataclass(frozen=True, eq=False)
class PowerAllocation:
    """슬롯별 Alice 전력 P_a, Bob(AN) 전력 P_b, 전력 분할 계수 α"""

    p_a: np.ndarray
    p_b: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        for name in ("p_a", "p_b", "alpha"):
            object.__setattr__(self, name, _readonly_vector(getattr(self, name), name))
        if not (self.p_a.shape == self.p_b.shape == self.alpha.shape):
            raise ScenarioError(
                "p_a, p_b and alpha must have the same length "
                f"({self.p_a.size}, {self.p_b.size}, {self.alpha.size})"
            )
        if np.any(self.p_a < 0) or np.any(self.p_b < 0):
            raise ScenarioError("transmit powers must be nonnegative")
        if np.any(self.alpha < 0) or np.any(self.alpha > 1):
            raise ScenarioError("alpha must lie in [0, 1]")

    def __len__(self) -> int:
        return self.p_a.size

    @classmethod
    def constant(cls, n_slots: int, p_a: float, p_b: float, alpha: float) -> "PowerAllocation":
        """모든 슬롯에 같은 값을 갖는 할당"""
        return cls(
            p_a=np.full(n_slots, p_a, dtype=float),
            p_b=np.full(n_slots, p_b, dtype=float),
            alpha=np.full(n_slots, alpha, dtype=float),
        )


@dataclass(frozen=True, eq=False)
class SlotLink:
    """정규화 채널 이득 (스칼라 또는 슬롯별 배열)"""

    h_ab: Real
    h_ae: Real

    def __post_init__(self):
        if not (np.all(np.asarray(self.h_ab) > 0) and np.all(np.asarray(self.h_ae) > 0)):
            raise ScenarioError("channel gains must be positive")

    @classmethod
    def along(cls, traj: Trajectory, cfg: ScenarioConfig) -> "SlotLink":
        """궤적의 모든 슬롯에 대한 Alice–Bob, Alice–Eve 이득"""
        return cls(
            h_ab=channel_gain(traj.waypoints, cfg.bob_xy, cfg),
            h_ae=channel_gain(traj.waypoints, cfg.eve_xy, cfg),
        )


@dataclass(frozen=True)
class AllocationLimits:
    """Alice, Bob의 평균/최대 전력 한도"""

    p_bar_a: float
    p_hat_a: float
    p_bar_b: float
    p_hat_b: float

    @classmethod
    def from_config(cls, cfg: ScenarioConfig) -> "AllocationLimits":
        budgets = cfg.budgets
        return cls(budgets.p_bar_a, budgets.p_hat_a, budgets.p_bar_b, budgets.p_hat_b)

    @classmethod
    def without_an(cls, cfg: ScenarioConfig) -> "AllocationLimits":
        """AN 없는 직접 전송: 전체 예산을 Alice에게, Bob 전력은 0"""
        budgets = cfg.budgets
        return cls(budgets.p_ave_w, budgets.p_hat_a, 0.0, 0.0)


class TermPowers(NamedTuple):
    """수신 신호의 항별 전력 (N0로 정규화)"""

    info: Real
    artificial_noise: Real
    forwarded_noise: Real


def sinr_bob(p_a: Real, p_b: Real, alpha: Real, h_ab: Real) -> Real:
    """Bob의 SINR (자신이 보낸 AN은 제거됨)"""
    numerator = alpha * p_a * h_ab * (p_b * h_ab + 1.0)
    return numerator / ((p_b + (1.0 - alpha) * p_a) * h_ab + 1.0)


def sinr_eve(p_a: Real, alpha: Real, h_ae: Real) -> Real:
    """Eve의 SINR (AN은 가우시안 간섭으로 남음)"""
    return alpha * p_a * h_ae / ((1.0 - alpha) * p_a * h_ae + 1.0)


def log_rate_gap(p_a: Real, p_b: Real, alpha: Real, link: SlotLink) -> Real:
    """ln(1+γ_B) − ln(1+γ_E), 클램프 없음 (부분문제 목적함수용)"""
    gamma_b = sinr_bob(p_a, p_b, alpha, link.h_ab)
    gamma_e = sinr_eve(p_a, alpha, link.h_ae)
    return np.log1p(gamma_b) - np.log1p(gamma_e)


def to_bps_hz(log_gap: Real) -> Real:
    """자연로그 전송률 차이를 반이중 비밀 전송률(bps/Hz)로 변환"""
    return 0.5 * np.maximum(log_gap, 0.0) / math.log(2.0)


def slot_secrecy_rate(p_a: Real, p_b: Real, alpha: Real, link: SlotLink) -> Real:
    """½·[log₂(1+γ_B) − log₂(1+γ_E)]⁺"""
    rate = to_bps_hz(log_rate_gap(p_a, p_b, alpha, link))
    if np.ndim(rate) == 0:
        return float(rate)
    return rate


def average_secrecy_rate(traj: Trajectory, alloc: PowerAllocation, cfg: ScenarioConfig) -> float:
    """궤적과 전력 할당에서 정확한 평균 비밀 전송률"""
    if len(traj) != cfg.n_slots or len(alloc) != cfg.n_slots:
        raise ScenarioError(
            f"length mismatch: trajectory {len(traj)}, allocation {len(alloc)}, "
            f"scenario {cfg.n_slots}"
        )
    link = SlotLink.along(traj, cfg)
    rates = slot_secrecy_rate(alloc.p_a, alloc.p_b, alloc.alpha, link)
    return float(np.mean(rates))


def received_term_powers(p_a: Real, p_b: Real, alpha: Real, h_ba: Real, h_ag: Real) -> TermPowers:
    """
    2단계 수신 신호의 항별 전력

    Alice는 1단계에서 받은 AN(+잡음)을 전력 (1−α)P_a로 정규화해 전달하므로
    증폭 계수는 (1−α)P_a / (P_b·h_ba + 1)이 된다.

    Args:
        h_ba: 1단계 Bob→Alice 이득 (상호성으로 h_ab와 같음)
        h_ag: 2단계 Alice→수신자 이득

    Returns:
        TermPowers(info, artificial_noise, forwarded_noise)
    """
    relay_gain = (1.0 - alpha) * p_a / (p_b * h_ba + 1.0)
    return TermPowers(
        info=alpha * p_a * h_ag,
        artificial_noise=relay_gain * p_b * h_ba * h_ag,
        forwarded_noise=relay_gain * h_ag,
    )


def validate_allocation(
    alloc: PowerAllocation,
    cfg: ScenarioConfig,
    limits: Optional[AllocationLimits] = None,
) -> List[Violation]:
    """α 범위와 전력 한도 검사. 빈 리스트면 실현 가능"""
    if len(alloc) != cfg.n_slots:
        raise ScenarioError(f"allocation has {len(alloc)} slots, scenario expects {cfg.n_slots}")
    limits = limits or AllocationLimits.from_config(cfg)

    violations = []
    for label, values, low, high in (
        ("alpha_range", alloc.alpha, 0.0, 1.0),
        ("alice_peak", alloc.p_a, 0.0, limits.p_hat_a),
        ("bob_peak", alloc.p_b, 0.0, limits.p_hat_b),
    ):
        slack = _BUDGET_RTOL * max(high, 1e-300)
        excess = np.maximum(low - values, values - high)
        for slot in np.flatnonzero(excess > slack):
            violations.append(Violation(label, int(slot) + 1, float(excess[slot])))

    for label, values, bound in (("alice_average", alloc.p_a, limits.p_bar_a), ("bob_average", alloc.p_b, limits.p_bar_b)):
        excess = float(values.mean()) - bound
        if excess > _BUDGET_RTOL * max(bound, 1e-300):
            violations.append(Violation(label, None, excess))

    return violations
