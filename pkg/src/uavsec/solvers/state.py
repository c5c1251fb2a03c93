# state.py - BCD 블록들이 공유하는 불변 솔버 상태

from dataclasses import dataclass, replace
from functools import cached_property

from ..scenario import ScenarioConfig, Trajectory
from ..secrecy_model import AllocationLimits, PowerAllocation, SlotLink


@dataclass(frozen=True)
class SolverState:
    """현재 반복점: 궤적, 전력 할당, 적용 중인 전력 한도"""

    cfg: ScenarioConfig
    trajectory: Trajectory
    alloc: PowerAllocation
    limits: AllocationLimits

    @cached_property
    def link(self) -> SlotLink:
        return SlotLink.along(self.trajectory, self.cfg)

    def with_alloc(self, **changes) -> "SolverState":
        return replace(self, alloc=replace(self.alloc, **changes))

    def with_trajectory(self, trajectory: Trajectory) -> "SolverState":
        return replace(self, trajectory=trajectory)
