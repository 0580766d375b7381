"""Solver selection for allocation problems."""

import logging
from typing import Optional, Sequence

from phaseswitch.allocator.branch_bound import solve_branch_and_bound
from phaseswitch.allocator.exhaustive import solve_exhaustive
from phaseswitch.allocator.problem import (
    DEFAULT_PHASE_ORDER,
    AllocationProblem,
    AllocationSolution,
)
from phaseswitch.config import Config, SolverType

logger = logging.getLogger(__name__)


class AllocationSolver:
    """Dispatches problems to the exhaustive or branch and bound solver.

    With ``SolverType.AUTO`` small switchable sets are enumerated and larger
    ones searched with branch and bound. Both return the same allocation.
    """

    def __init__(
        self,
        config: Optional[Config] = None,
        phase_order: Sequence[int] = DEFAULT_PHASE_ORDER,
    ) -> None:
        self.config = config or Config.default()
        self.phase_order = tuple(phase_order)

    def solve(self, problem: AllocationProblem) -> AllocationSolution:
        solver = self.config.solver
        if solver == SolverType.AUTO:
            if problem.switchable_count <= self.config.auto_exhaustive_limit:
                solver = SolverType.EXHAUSTIVE
            else:
                solver = SolverType.BRANCH_AND_BOUND

        if solver == SolverType.EXHAUSTIVE:
            return solve_exhaustive(problem, self.config.exhaustive_cap, self.phase_order)
        return solve_branch_and_bound(problem, self.phase_order)


def solve(problem: AllocationProblem, config: Optional[Config] = None) -> AllocationSolution:
    """Solve one allocation problem with the solver chosen by ``config``."""
    return AllocationSolver(config).solve(problem)
