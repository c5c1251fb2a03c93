# an_split.py - AN 전력 분할 계수 α 부분문제 (닫힌 형태 + 황금분할 탐색)

import logging
import math
from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np

from ..errors import ClosedFormUnavailable, ScenarioError
from ..secrecy_model import SlotLink
from .state import SolverState

logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/φ
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/φ²


@dataclass(frozen=True, eq=False)
class GammaTriple:
    """γ1 = P_a·h_ab, γ2 = P_b·h_ab, γ3 = P_a·h_ae"""

    g1: Real
    g2: Real
    g3: Real

    def __post_init__(self):
        if any(np.any(np.asarray(g) < 0) for g in (self.g1, self.g2, self.g3)):
            raise ScenarioError("gamma values must be nonnegative")

    @classmethod
    def from_powers(cls, p_a: Real, p_b: Real, link: SlotLink) -> "GammaTriple":
        p_a = np.asarray(p_a, dtype=float)
        p_b = np.asarray(p_b, dtype=float)
        return cls(g1=p_a * link.h_ab, g2=p_b * link.h_ab, g3=p_a * link.h_ae)


def psi(x: Real, g: GammaTriple) -> Real:
    """Ψ(x) = (1+γ_B)/(1+γ_E), 분할 계수 x에서의 전송률 비"""
    x = np.asarray(x, dtype=float)
    numerator = ((1.0 - x) * g.g3 + 1.0) * ((x * g.g2 + 1.0) * g.g1 + g.g2 + 1.0)
    denominator = (g.g3 + 1.0) * ((1.0 - x) * g.g1 + g.g2 + 1.0)
    value = numerator / denominator
    if np.ndim(value) == 0:
        return float(value)
    return value


def _closed_form(g1: np.ndarray, g2: np.ndarray, g3: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """닫힌 형태 해와 적용 가능 마스크 (γᵢ > 0, γ3(1+γ2) > γ1)"""
    with np.errstate(divide="ignore", invalid="ignore"):
        m = 1.0 + g2
        usable = (g1 > 0) & (g2 > 0) & (g3 > 0) & (g3 * m > g1)
        radicand = (g3 * m - g1) * m * (m + g1) / (g2 * g3)
        x = (m + g1) / g1 - np.sqrt(np.where(usable, radicand, 0.0)) / g1
    return np.clip(np.where(usable, x, 0.0), 0.0, 1.0), usable


def alpha_closed_form(g: GammaTriple) -> float:
    """
    dΨ/dx = 0의 근에서 얻은 최적 α

    Raises:
        ClosedFormUnavailable: γᵢ 중 0이 있거나 근호 안이 양수가 아닌 경우
    """
    x, usable = _closed_form(*(np.atleast_1d(np.asarray(v, dtype=float)) for v in (g.g1, g.g2, g.g3)))
    if x.size != 1:
        raise ScenarioError("alpha_closed_form expects a single slot")
    if not usable[0]:
        raise ClosedFormUnavailable(
            f"closed form needs positive gammas with γ3(1+γ2) > γ1, got ({g.g1}, {g.g2}, {g.g3})"
        )
    return float(x[0])


def alpha_high_snr(p_a: float, p_b: float) -> float:
    """고 SNR 근사 α ≈ 1 − (√(r(1+r)) − r), r = P_b/P_a (진단용)"""
    if not p_a > 0:
        raise ScenarioError(f"p_a must be positive, got {p_a}")
    r = p_b / p_a
    return float(np.clip(1.0 - (math.sqrt(r * (1.0 + r)) - r), 0.0, 1.0))


def golden_section_argmax(
    f: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray, tol: float
) -> np.ndarray:
    """
    단봉 함수들의 최대점을 원소별로 동시에 황금분할 탐색

    구간 끝점이 내부 추정보다 좋으면 끝점을 반환한다.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    f_lo0, f_hi0 = f(lo), f(hi)
    lo0, hi0 = lo.copy(), hi.copy()

    width = float(np.max(hi - lo)) if lo.size else 0.0
    if width <= tol:
        return 0.5 * (lo + hi)
    steps = int(math.ceil(math.log(tol / width) / math.log(INV_PHI)))

    c = lo + INV_PHI2 * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(steps):
        left = fc > fd
        # 최대점이 [lo, d]에 있으면 hi ← d, 아니면 lo ← c
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
        new_c = np.where(left, lo + INV_PHI2 * (hi - lo), d)
        new_d = np.where(left, c, lo + INV_PHI * (hi - lo))
        probe = np.where(left, new_c, new_d)
        f_probe = f(probe)
        fc, fd = np.where(left, f_probe, fd), np.where(left, fc, f_probe)
        c, d = new_c, new_d

    best = 0.5 * (lo + hi)
    f_best = f(best)
    best = np.where(f_lo0 > f_best, lo0, best)
    f_best = np.maximum(f_best, f_lo0)
    return np.where(f_hi0 > f_best, hi0, best)


def solve_alpha(state: SolverState) -> np.ndarray:
    """
    α 블록 갱신

    슬롯마다 닫힌 형태를 쓰고, 적용할 수 없는 슬롯은 Ψ의 준오목성에 기대어
    황금분할 탐색으로 최대화한다. Ψ가 줄어드는 슬롯은 이전 값을 유지한다.
    """
    n = state.cfg.n_slots
    solver = state.cfg.solver
    g = GammaTriple.from_powers(state.alloc.p_a, state.alloc.p_b, state.link)
    g1, g2, g3 = (np.broadcast_to(np.asarray(v, dtype=float), (n,)) for v in (g.g1, g.g2, g.g3))

    alpha, usable = _closed_form(g1, g2, g3)
    fallback = ~usable
    if np.any(fallback):
        sub = GammaTriple(g1[fallback], g2[fallback], g3[fallback])
        alpha[fallback] = golden_section_argmax(
            lambda x: np.log(psi(x, sub)),
            np.zeros(int(fallback.sum())),
            np.ones(int(fallback.sum())),
            solver.inner_tol,
        )
        logger.debug("alpha: golden-section fallback on %d of %d slots", int(fallback.sum()), n)

    alpha = np.clip(alpha, solver.alpha_clamp, 1.0 - solver.alpha_clamp)

    full = GammaTriple(g1, g2, g3)
    previous = state.alloc.alpha
    keep = np.log(psi(alpha, full)) < np.log(psi(previous, full))
    if np.any(keep):
        logger.debug("alpha: kept previous value on %d slots", int(keep.sum()))
    return np.where(keep, previous, alpha)
