from typing import Dict, Optional, Type, Union

from src.config.settings import settings
from src.core.errors import InstanceError
from src.core.models import Amount, AuctionInstance
from src.core.wdp.base import WdpSolver
from src.core.wdp.dp import DynamicProgrammingSolver, winning_allocations_dp
from src.core.wdp.oracle import OracleSolver, winning_allocations_oracle

SOLVERS: Dict[str, Type[WdpSolver]] = {
    OracleSolver.name: OracleSolver,
    DynamicProgrammingSolver.name: DynamicProgrammingSolver,
}

SolverLike = Union[str, WdpSolver, None]


def get_solver(solver: SolverLike = None) -> WdpSolver:
    """Resolve a solver name (or None for the configured default) to a solver instance."""
    if isinstance(solver, WdpSolver):
        return solver
    name = solver or settings.DEFAULT_SOLVER
    try:
        return SOLVERS[name]()
    except KeyError:
        raise InstanceError(f"unknown solver '{name}'; choose from {', '.join(sorted(SOLVERS))}") from None


def max_value(instance: AuctionInstance, solver: SolverLike = None) -> Amount:
    """The optimal total bid value. Every solver agrees on it."""
    return get_solver(solver).value(instance)


__all__ = [
    "SOLVERS",
    "WdpSolver",
    "OracleSolver",
    "DynamicProgrammingSolver",
    "get_solver",
    "max_value",
    "winning_allocations_oracle",
    "winning_allocations_dp",
]
