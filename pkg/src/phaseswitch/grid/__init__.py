"""Network, household and phase allocation model."""

from phaseswitch.grid.household import Household, Phase, PHASES
from phaseswitch.grid.allocation import (
    AllocationValidation,
    PhaseAllocation,
    SlotFlows,
    aggregate_phase_flows,
    apply_phase_decisions,
    as_phase,
    validate_allocation,
)
from phaseswitch.grid.feeder import Bus, FeederModel, Segment, balanced_phasors, build_feeder_model
from phaseswitch.grid.loader import load_network, network_from_dict

__all__ = [
    "Household",
    "Phase",
    "PHASES",
    "AllocationValidation",
    "PhaseAllocation",
    "SlotFlows",
    "aggregate_phase_flows",
    "apply_phase_decisions",
    "as_phase",
    "validate_allocation",
    "Bus",
    "FeederModel",
    "Segment",
    "balanced_phasors",
    "build_feeder_model",
    "load_network",
    "network_from_dict",
]
