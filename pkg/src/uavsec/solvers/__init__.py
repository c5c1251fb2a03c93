# solvers/__init__.py - BCD 블록별 부분문제 솔버

from .alice_power import AliceSlotCoeffs, solve_alice_power
from .an_split import GammaTriple, solve_alpha
from .bob_power import BobSlotCoeffs, solve_bob_power
from .state import SolverState
from .trajectory_opt import TrajectoryResult, TrajSlotCoeffs, solve_trajectory

__all__ = [
    "AliceSlotCoeffs",
    "BobSlotCoeffs",
    "GammaTriple",
    "SolverState",
    "TrajSlotCoeffs",
    "TrajectoryResult",
    "solve_alice_power",
    "solve_alpha",
    "solve_bob_power",
    "solve_trajectory",
]
