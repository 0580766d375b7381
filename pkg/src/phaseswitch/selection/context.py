"""Inputs shared by the switch-placement heuristics."""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from phaseswitch.config import VoltageReference
from phaseswitch.exceptions import ConfigError, LoadflowError
from phaseswitch.grid.allocation import PhaseAllocation
from phaseswitch.grid.feeder import FeederModel
from phaseswitch.grid.household import Household, Phase
from phaseswitch.loadflow.sweep import LoadflowResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelectionContext:
    """Horizon averages and budget used to pick switch-equipped households.

    Attributes:
        long_run_avg_power: Signed horizon-average kW per household.
        per_phase_avg_voltage: Horizon-average phase voltage magnitudes (V),
            one 3-tuple per feeder id.
        allocation: Phase allocation the heuristics start from.
        households: Household flags.
        budget: Number of switches ``k`` to place.
    """

    long_run_avg_power: Mapping[str, float]
    per_phase_avg_voltage: Mapping[str, Tuple[float, float, float]]
    allocation: PhaseAllocation
    households: Tuple[Household, ...]
    budget: int
    _by_id: Dict[str, Household] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ConfigError("switch budget must be non-negative", "budget")
        object.__setattr__(self, "_by_id", {h.id: h for h in self.households})

    def household(self, household_id: str) -> Household:
        return self._by_id[household_id]

    def participants(self) -> Tuple[Household, ...]:
        """Market participants present in the allocation, sorted by id."""
        return tuple(
            sorted(
                (h for h in self.households if h.market_participant and h.id in self.allocation),
                key=lambda h: h.id,
            )
        )

    def average(self, household_id: str) -> float:
        return float(self.long_run_avg_power.get(household_id, 0.0))

    def phase_ranking(self, feeder_id: str) -> Tuple[Phase, Phase, Phase]:
        """Phases of a feeder from highest to lowest average voltage (ties by phase)."""
        voltages = self.per_phase_avg_voltage.get(feeder_id)
        if voltages is None:
            raise ConfigError(f"no phase voltages for feeder {feeder_id}", "per_phase_avg_voltage")
        order = sorted(range(3), key=lambda i: (-float(voltages[i]), i))
        return Phase(order[0]), Phase(order[1]), Phase(order[2])

    def with_budget(self, budget: int) -> "SelectionContext":
        return replace(self, budget=budget)


def average_phase_voltages(
    model: FeederModel,
    results: Sequence[LoadflowResult],
    reference: VoltageReference = VoltageReference.FARTHEST,
) -> Dict[str, Tuple[float, float, float]]:
    """Per-feeder phase voltage magnitudes averaged over converged slots.

    With ``VoltageReference.FARTHEST`` the feeder's farthest loaded bus is
    sampled; with ``AVERAGE`` all its buses are.

    Raises:
        LoadflowError: No converged result to average.
    """
    converged = [r for r in results if r.converged]
    if not converged:
        raise LoadflowError("no converged load flow to average phase voltages over")
    if len(converged) < len(results):
        logger.warning(
            "averaging phase voltages over %d of %d slots", len(converged), len(results)
        )
    stacked = np.stack([r.voltages.magnitudes() for r in converged])
    averages: Dict[str, Tuple[float, float, float]] = {}
    for feeder_id in model.feeders:
        if not model.households_on(feeder_id):
            continue
        if reference == VoltageReference.FARTHEST:
            rows = [model.bus_index(model.farthest_loaded_bus(feeder_id))]
        else:
            rows = [model.bus_index(b.id) for b in model.buses_on(feeder_id)]
        mean = stacked[:, rows, :].mean(axis=(0, 1))
        averages[feeder_id] = (float(mean[0]), float(mean[1]), float(mean[2]))
    return averages


def build_selection_context(
    model: FeederModel,
    long_run_avg_power: Mapping[str, float],
    baseline: Sequence[LoadflowResult],
    budget: int,
    allocation: Optional[PhaseAllocation] = None,
    reference: VoltageReference = VoltageReference.FARTHEST,
) -> SelectionContext:
    """Context from horizon-average powers and a baseline load-flow run."""
    return SelectionContext(
        long_run_avg_power=dict(long_run_avg_power),
        per_phase_avg_voltage=average_phase_voltages(model, baseline, reference),
        allocation=allocation or model.initial_allocation(),
        households=model.households,
        budget=budget,
    )
