"""Choice of the households that receive dynamic phase switches."""

from phaseswitch.selection.context import (
    SelectionContext,
    average_phase_voltages,
    build_selection_context,
)
from phaseswitch.selection.heuristics import (
    PhaseMove,
    hybrid_pool_size,
    phase_spread,
    plan_mean_based,
    select,
    select_haf,
    select_hybrid,
    select_mean_based,
)

__all__ = [
    "SelectionContext",
    "average_phase_voltages",
    "build_selection_context",
    "PhaseMove",
    "hybrid_pool_size",
    "phase_spread",
    "plan_mean_based",
    "select",
    "select_haf",
    "select_hybrid",
    "select_mean_based",
]
