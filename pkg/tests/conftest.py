# tests/conftest.py - 공용 픽스처

import numpy as np
import pytest

from uavsec.scenario import PowerBudget, ScenarioConfig, SolverTolerances, Trajectory
from uavsec.secrecy_model import AllocationLimits, PowerAllocation
from uavsec.solvers import SolverState


def build_config(horizon_s=120.0, n_slots=100, p_ave_w=1e-3, split=0.5, solver=None, **changes):
    """기본 시뮬레이션 파라미터로 ScenarioConfig 생성"""
    params = dict(
        n_slots=n_slots,
        horizon_s=horizon_s,
        altitude_m=100.0,
        speed_mps=4.0,
        gamma0=1e8,
        bob_xy=(0.0, 0.0),
        eve_xy=(100.0, 0.0),
        start_xy=(50.0, 200.0),
        end_xy=(50.0, -200.0),
        budgets=PowerBudget(p_ave_w=p_ave_w, split=split, peak_factor=4.0),
        solver=solver or SolverTolerances(),
    )
    params.update(changes)
    return ScenarioConfig(**params)


def build_state(cfg, waypoints, p_a, p_b, alpha, limits=None):
    """임의의 경유점과 전력으로 SolverState 생성"""
    n = cfg.n_slots
    alloc = PowerAllocation(
        p_a=np.broadcast_to(p_a, (n,)),
        p_b=np.broadcast_to(p_b, (n,)),
        alpha=np.broadcast_to(alpha, (n,)),
    )
    return SolverState(
        cfg=cfg,
        trajectory=Trajectory(waypoints),
        alloc=alloc,
        limits=limits or AllocationLimits.from_config(cfg),
    )


@pytest.fixture
def make_config():
    return build_config


@pytest.fixture
def make_state():
    return build_state


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
