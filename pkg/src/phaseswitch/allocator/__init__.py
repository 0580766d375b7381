"""Per-slot exact phase allocation of market participants."""

from phaseswitch.allocator.problem import (
    DEFAULT_PHASE_ORDER,
    AllocationProblem,
    AllocationSolution,
    CommitmentSet,
    build_problem,
    count_switches,
    objective_key,
    objective_value,
    phases_objective,
)
from phaseswitch.allocator.exhaustive import DEFAULT_EXHAUSTIVE_CAP, solve_exhaustive
from phaseswitch.allocator.branch_bound import remaining_bound, solve_branch_and_bound
from phaseswitch.allocator.solver import AllocationSolver, solve
from phaseswitch.allocator.corpus import dump_instance, load_instance

__all__ = [
    "DEFAULT_PHASE_ORDER",
    "AllocationProblem",
    "AllocationSolution",
    "CommitmentSet",
    "build_problem",
    "count_switches",
    "objective_key",
    "objective_value",
    "phases_objective",
    "DEFAULT_EXHAUSTIVE_CAP",
    "solve_exhaustive",
    "remaining_bound",
    "solve_branch_and_bound",
    "AllocationSolver",
    "solve",
    "dump_instance",
    "load_instance",
]
