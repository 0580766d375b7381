"""Depth-first branch and bound for the per-slot allocation problem.

Switchable houses are branched on in order of descending ``|p_c|``. At a node
with per-phase partial sums ``s`` the remaining commitments add ``r_i`` to
phase ``i``, where every ``r_i`` is a subset sum of the remaining commitments
and ``r_a + r_b + r_c`` equals their total ``R``. Each subset sum lies in
``[L, U]`` (sum of the remaining negative, resp. positive, commitments), so

    min  sum_i (g_i - r_i)^2   s.t.  sum_i r_i = R,  L <= r_i <= U

with gaps ``g = e_bar - s`` is a lower bound on every leaf below the node.
The minimiser is ``r_i = clip(g_i - lam, L, U)`` for the level ``lam`` at
which the clipped values sum to ``R``; the clipped sum is piecewise linear
and non-increasing in ``lam``, so the level is found by scanning its
breakpoints.
"""

import logging
from typing import List, Sequence, Tuple

from phaseswitch.allocator.problem import (
    DEFAULT_PHASE_ORDER,
    AllocationProblem,
    AllocationSolution,
    fixed_phase_sums,
    objective_key,
    phases_objective,
    tie_break_ranks,
)

logger = logging.getLogger(__name__)

# Bounds are computed in a different summation order than leaf objectives.
BOUND_MARGIN = 1e-12


def remaining_bound(gaps: Sequence[float], lower: float, upper: float) -> float:
    """Smallest deviation reachable by splitting the remaining flow over the phases.

    Args:
        gaps: Per-phase distance ``e_bar - s`` still to cover.
        lower: Sum of the remaining negative commitments.
        upper: Sum of the remaining positive commitments.
    """
    if upper - lower <= 0.0:
        return sum(g * g for g in gaps)
    total = lower + upper

    def clipped(level: float) -> float:
        return sum(min(max(g - level, lower), upper) for g in gaps)

    points = sorted({g - upper for g in gaps} | {g - lower for g in gaps})
    level = points[-1]
    prev_point = points[0]
    prev_value = clipped(prev_point)
    for point in points:
        value = clipped(point)
        if value <= total:
            if value == total or point == prev_point:
                level = point
            else:
                level = prev_point + (prev_value - total) * (point - prev_point) / (prev_value - value)
            break
        prev_point, prev_value = point, value

    bound = 0.0
    for g in gaps:
        r = min(max(g - level, lower), upper)
        bound += (g - r) * (g - r)
    return bound


class _Search:
    """Mutable state of one branch and bound run."""

    def __init__(self, problem: AllocationProblem, phase_order: Sequence[int]) -> None:
        self.problem = problem
        self.ranks = tie_break_ranks(phase_order)
        self.positions = problem.switchable_positions()
        self.powers = [float(v) for v in problem.commitments]
        self.target = [float(v) for v in problem.e_bar]
        self.order = sorted(self.positions, key=lambda j: (-abs(self.powers[j]), j))
        self.margin = BOUND_MARGIN * problem.scale
        self.max_switches = problem.max_switches

        count = len(self.order)
        self.lower = [0.0] * (count + 1)
        self.upper = [0.0] * (count + 1)
        for depth in range(count - 1, -1, -1):
            p = self.powers[self.order[depth]]
            self.lower[depth] = self.lower[depth + 1] + min(p, 0.0)
            self.upper[depth] = self.upper[depth + 1] + max(p, 0.0)

        self.assigned: List[int] = list(problem.current_phases)
        self.nodes = 0
        self.best_phases: Tuple[int, ...] = tuple(problem.current_phases)
        self.best: Tuple[int, int, Tuple[int, ...]] = self._rank(self.best_phases, 0)

    def _rank(self, phases: Sequence[int], switches: int) -> Tuple[int, int, Tuple[int, ...]]:
        objective = phases_objective(self.problem, phases)
        lex = tuple(self.ranks[phases[j]] for j in self.positions)
        return objective_key(self.problem, objective), switches, lex

    def _bound_key(self, depth: int, sums: Sequence[float]) -> int:
        gaps = [self.target[i] - sums[i] for i in range(3)]
        bound = remaining_bound(gaps, self.lower[depth], self.upper[depth])
        return objective_key(self.problem, bound - self.margin)

    def run(self) -> None:
        self._visit(0, list(fixed_phase_sums(self.problem)), 0)

    def _visit(self, depth: int, sums: List[float], switches: int) -> None:
        self.nodes += 1
        if depth == len(self.order):
            phases = tuple(self.assigned)
            candidate = self._rank(phases, switches)
            if candidate < self.best:
                self.best = candidate
                self.best_phases = phases
            return

        house = self.order[depth]
        current = self.problem.current_phases[house]
        children = []
        for phase in range(3):
            moved = switches + (phase != current)
            if self.max_switches is not None and moved > self.max_switches:
                continue
            child = list(sums)
            child[phase] += self.powers[house]
            key = self._bound_key(depth + 1, child)
            children.append((key, self.ranks[phase], phase, child, moved))
        children.sort(key=lambda c: (c[0], c[1]))

        for key, _, phase, child, moved in children:
            best_key, best_switches, _ = self.best
            if key > best_key or (key >= best_key and moved > best_switches):
                continue
            self.assigned[house] = phase
            self._visit(depth + 1, child, moved)
        self.assigned[house] = current


def solve_branch_and_bound(
    problem: AllocationProblem,
    phase_order: Sequence[int] = DEFAULT_PHASE_ORDER,
) -> AllocationSolution:
    """Exact optimum with the same tie-breaking as :func:`solve_exhaustive`.

    Args:
        problem: The allocation problem.
        phase_order: Tie-break order of the phase indices.
    """
    search = _Search(problem, phase_order)
    search.run()
    _, switches, _ = search.best
    logger.debug(
        "branch and bound: slot %d, %d switchable, %d nodes",
        problem.slot_index,
        len(search.positions),
        search.nodes,
    )
    return AllocationSolution(
        household_ids=problem.household_ids,
        phases=search.best_phases,
        objective=phases_objective(problem, search.best_phases),
        switches_from_current=switches,
        optimal=True,
        solver="branch_and_bound",
        evaluated=search.nodes,
    )
