# dual.py - 평균 전력 제약의 라그랑주 승수 이분 탐색

import logging
import math
from typing import Callable, Tuple

import numpy as np

from ..constants import MAX_BISECTION_STEPS
from ..errors import SolverError

logger = logging.getLogger(__name__)

PowerMap = Callable[[float], np.ndarray]


def bisect_multiplier(power_at: PowerMap, budget: float, tol: float, lower: float) -> Tuple[float, np.ndarray]:
    """
    Σp(ν) ≤ budget를 만족하는 가장 작은 승수 ν를 이분 탐색으로 찾기

    Σp(ν)는 ν에 대해 비증가라고 가정한다. 항상 예산을 만족하는 쪽(상한)을 반환하므로
    결과 전력은 평균 전력 제약을 정확히 지킨다.

    Args:
        power_at: 승수 ν에서 슬롯별 전력 벡터를 돌려주는 함수
        budget: N·P̄
        tol: 허용 오차 (N·bisection_tol)
        lower: 탐색 하한 (0 또는 λ_min)

    Returns:
        (승수, 슬롯별 전력)
    """
    hi = max(2.0 * lower, 1.0)
    powers_hi = power_at(hi)
    for _ in range(MAX_BISECTION_STEPS):
        if powers_hi.sum() <= budget:
            break
        hi *= 2.0
        powers_hi = power_at(hi)
    else:
        raise SolverError(f"could not bracket the power multiplier (last upper bound {hi:.3e})")

    lo = lower
    steps = 0
    for steps in range(1, MAX_BISECTION_STEPS + 1):
        if budget - powers_hi.sum() <= tol or hi - lo <= 4 * np.finfo(float).eps * hi:
            break
        mid = math.sqrt(lo * hi) if lo > 0 else 0.5 * (lo + hi)
        powers_mid = power_at(mid)
        if powers_mid.sum() > budget:
            lo = mid
        else:
            hi, powers_hi = mid, powers_mid

    logger.debug("multiplier bisection: %.6e after %d steps (gap %.3e)", hi, steps, budget - powers_hi.sum())
    return hi, powers_hi
