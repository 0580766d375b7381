"""Exact allocation by enumerating every assignment of the switchable houses."""

import logging
from typing import Sequence

import numpy as np

from phaseswitch.allocator.problem import (
    DEFAULT_PHASE_ORDER,
    OBJECTIVE_RESOLUTION,
    AllocationProblem,
    AllocationSolution,
    count_switches,
    deviation,
    fixed_phase_sums,
    phases_objective,
    tie_break_ranks,
)
from phaseswitch.exceptions import SolverCapExceeded

logger = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_CAP = 12


def solve_exhaustive(
    problem: AllocationProblem,
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
    phase_order: Sequence[int] = DEFAULT_PHASE_ORDER,
) -> AllocationSolution:
    """Global optimum over all ``3^E`` assignments of the switchable houses.

    Fixed houses stay pinned. Among allocations with equal (quantized)
    objective the one with the fewest switches wins, then the
    lexicographically smallest phase sequence of the switchable houses in
    commitment order, ranked by ``phase_order``.

    Raises:
        SolverCapExceeded: More than ``cap`` switchable houses.
    """
    tie_break_ranks(phase_order)
    positions = problem.switchable_positions()
    count = len(positions)
    if count > cap:
        raise SolverCapExceeded(count, cap)

    current = problem.current_phases
    if count == 0:
        return AllocationSolution(
            household_ids=problem.household_ids,
            phases=current,
            objective=phases_objective(problem, current),
            switches_from_current=0,
            optimal=True,
            solver="exhaustive",
            evaluated=1,
        )

    # Rows enumerate tie-break ranks in lexicographic order.
    ranks = np.indices((3,) * count).reshape(count, -1).T
    assigned = np.asarray(tuple(phase_order), dtype=np.int64)[ranks]
    rows = assigned.shape[0]

    fixed = fixed_phase_sums(problem)
    sums = [np.full(rows, fixed[i]) for i in range(3)]
    switches = np.zeros(rows, dtype=np.int64)
    for k, j in enumerate(positions):
        column = assigned[:, k]
        power = float(problem.commitments[j])
        for i in range(3):
            sums[i] = sums[i] + np.where(column == i, power, 0.0)
        switches += column != current[j]
    objectives = deviation(problem.e_bar, sums)
    keys = np.floor(objectives / (problem.scale * OBJECTIVE_RESOLUTION) + 0.5).astype(np.int64)

    candidates = np.arange(rows)
    if problem.max_switches is not None:
        candidates = candidates[switches <= problem.max_switches]
    best = candidates[np.lexsort((candidates, switches[candidates], keys[candidates]))[0]]

    phases = list(current)
    for k, j in enumerate(positions):
        phases[j] = int(assigned[best, k])
    logger.debug(
        "exhaustive: slot %d, %d switchable, %d assignments", problem.slot_index, count, rows
    )
    return AllocationSolution(
        household_ids=problem.household_ids,
        phases=tuple(phases),
        objective=phases_objective(problem, phases),
        switches_from_current=count_switches(problem, phases),
        optimal=True,
        solver="exhaustive",
        evaluated=rows,
    )
