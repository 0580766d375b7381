"""Switch-placement heuristics: Mean-Based, Highest-Average-Flow and Hybrid."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from phaseswitch.config import SelectionStrategy
from phaseswitch.grid.household import PHASES, Phase
from phaseswitch.selection.context import SelectionContext

logger = logging.getLogger(__name__)

# A greedy move must lower the spread by more than this (kW).
MIN_IMPROVEMENT = 1e-12


@dataclass(frozen=True)
class PhaseMove:
    """One greedy Mean-Based reallocation step.

    Attributes:
        household_id: Household moved.
        from_phase: Phase before the move.
        to_phase: Phase after the move.
        spread_after: Total per-feeder spread once the move is applied.
    """

    household_id: str
    from_phase: Phase
    to_phase: Phase
    spread_after: float


def _phase_totals(ctx: SelectionContext, phases: Dict[str, Phase]) -> Dict[str, List[float]]:
    totals: Dict[str, List[float]] = {}
    for house in ctx.participants():
        sums = totals.setdefault(house.feeder_id, [0.0, 0.0, 0.0])
        sums[phases[house.id]] += ctx.average(house.id)
    return totals


def _spread(sums: List[float]) -> float:
    return max(sums) - min(sums)


def phase_spread(ctx: SelectionContext) -> float:
    """Sum over feeders of the max - min per-phase participant average power."""
    phases = {h.id: ctx.allocation.phase_of(h.id) for h in ctx.participants()}
    return sum(_spread(s) for s in _phase_totals(ctx, phases).values())


def plan_mean_based(ctx: SelectionContext) -> List[PhaseMove]:
    """Greedy moves that most reduce the per-phase average power spread.

    Each step tries every unpicked participant on every other phase and keeps
    the move with the lowest resulting spread (ties: household id, then target
    phase). Stops after ``ctx.budget`` moves or when no move strictly helps.
    """
    participants = ctx.participants()
    phases = {h.id: ctx.allocation.phase_of(h.id) for h in participants}
    totals = _phase_totals(ctx, phases)
    spreads = {f: _spread(s) for f, s in totals.items()}
    current = sum(spreads.values())
    picked = set()
    moves: List[PhaseMove] = []

    while len(moves) < ctx.budget:
        best = None
        for house in participants:
            if house.id in picked:
                continue
            power = ctx.average(house.id)
            feeder = house.feeder_id
            source = phases[house.id]
            for target in PHASES:
                if target == source:
                    continue
                sums = list(totals[feeder])
                sums[source] -= power
                sums[target] += power
                candidate = current - spreads[feeder] + _spread(sums)
                if best is None or candidate < best[0]:
                    best = (candidate, house, target, sums)
        if best is None or best[0] >= current - MIN_IMPROVEMENT:
            break
        spread_after, house, target, sums = best
        moves.append(PhaseMove(house.id, phases[house.id], target, spread_after))
        logger.debug("MB move %s %s->%s, spread %.4f", house.id, phases[house.id], target, spread_after)
        picked.add(house.id)
        phases[house.id] = target
        totals[house.feeder_id] = sums
        spreads[house.feeder_id] = _spread(sums)
        current = sum(spreads.values())
    return moves


def select_mean_based(ctx: SelectionContext) -> List[str]:
    """Households picked by :func:`plan_mean_based`, in pick order."""
    return [move.household_id for move in plan_mean_based(ctx)]


def _haf_ranked(ctx: SelectionContext) -> List[Tuple[int, float, str]]:
    """HAF pool with sort keys ``(priority, -|avg|, id)``.

    The pool holds PV houses on the highest-voltage phase of their feeder and
    non-PV houses on any other phase. Non-PV houses on the middle phase rank
    after everything else.
    """
    ranked = []
    for house in ctx.participants():
        highest, _, lowest = ctx.phase_ranking(house.feeder_id)
        phase = ctx.allocation.phase_of(house.id)
        if house.has_pv:
            if phase != highest:
                continue
            priority = 0
        else:
            if phase == highest:
                continue
            priority = 0 if phase == lowest else 1
        ranked.append((priority, -abs(ctx.average(house.id)), house.id))
    ranked.sort()
    return ranked


def select_haf(ctx: SelectionContext) -> List[str]:
    """Highest-average-flow households among the voltage-based pool."""
    return [hid for _, _, hid in _haf_ranked(ctx)][: ctx.budget]


def hybrid_pool_size(budget: int) -> int:
    return max(2 * budget, budget + 2)


def select_hybrid(ctx: SelectionContext) -> List[str]:
    """Mean-Based pre-selection of ``max(2k, k+2)`` houses narrowed by HAF."""
    if ctx.budget == 0:
        return []
    pool = set(select_mean_based(ctx.with_budget(hybrid_pool_size(ctx.budget))))
    return [hid for _, _, hid in _haf_ranked(ctx) if hid in pool][: ctx.budget]


def select(ctx: SelectionContext, strategy: SelectionStrategy) -> List[str]:
    """Run the heuristic named by ``strategy``."""
    if strategy == SelectionStrategy.MB:
        chosen = select_mean_based(ctx)
    elif strategy == SelectionStrategy.HAF:
        chosen = select_haf(ctx)
    else:
        chosen = select_hybrid(ctx)
    logger.info("%s selected %d of %d houses: %s", strategy.value, len(chosen), ctx.budget, chosen)
    return chosen
